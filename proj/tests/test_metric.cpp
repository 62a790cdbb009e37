#include <doctest.h>

#include <random>
#include <vector>

#include "csn/errors.hpp"
#include "csn/metric.hpp"
#include "csn/splits.hpp"

using namespace csn;

namespace {

DissimilarityMatrix mat(int n, std::vector<std::vector<int>> rows) {
  std::vector<std::vector<Rat>> r;
  for (auto& row : rows) {
    std::vector<Rat> out;
    for (int v : row) out.push_back(Rat(v));
    r.push_back(std::move(out));
  }
  return DissimilarityMatrix::make(n, std::move(r));
}

// Unit quartet tree: d(1,2)=d(3,4)=2, cross distances 3.
DissimilarityMatrix quartet() {
  return mat(4, {{0, 2, 3, 3}, {2, 0, 3, 3}, {3, 3, 0, 2}, {3, 3, 2, 0}});
}

// Metric of the two crossing splits {12|34}, {14|23}, unit weights.
DissimilarityMatrix crossing() {
  return mat(4, {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
}

}  // namespace

TEST_CASE("matrix validation") {
  CHECK_THROWS_AS(mat(4, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(
      mat(3, {{0, 1, 1}, {2, 0, 1}, {1, 1, 0}}), Error);  // asymmetric
  CHECK_THROWS_AS(
      mat(3, {{1, 1, 1}, {1, 0, 1}, {1, 1, 0}}), Error);  // nonzero diagonal
  CHECK_THROWS_AS(
      mat(3, {{0, -1, 1}, {-1, 0, 1}, {1, 1, 0}}), Error);  // negative
  CHECK(mat(3, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}).max_entry() == Rat(1));
}

TEST_CASE("four-point: quartet passes, three distinct sums fail") {
  CHECK(four_point_check(quartet(), Cmp::exact()).pass);

  auto zero = mat(4, {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  CHECK(four_point_check(zero, Cmp::exact()).pass);

  // d(1,2)=2, d(3,4)=2, d(1,3)=2, d(2,4)=3, d(1,4)=3, d(2,3)=3:
  // sums 4, 5, 6 pairwise distinct.
  auto bad = mat(4, {{0, 2, 2, 3}, {2, 0, 3, 3}, {2, 3, 0, 2}, {3, 3, 2, 0}});
  auto report = four_point_check(bad, Cmp::exact());
  REQUIRE_FALSE(report.pass);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->taxa == std::array<int, 4>{1, 2, 3, 4});
  CHECK(report.witness->sums == std::array<Rat, 3>{Rat(4), Rat(5), Rat(6)});

  auto found = find_kalmanson_ordering(bad, Cmp::exact(), 9);
  REQUIRE(found.has_value());
  CHECK(found->seq() == std::vector<int>{1, 2, 4, 3});
}

TEST_CASE("crossing-splits metric: Kalmanson passes, four-point fails") {
  auto d = crossing();
  auto ord = CircularOrdering::make({1, 2, 3, 4});
  auto kal = kalmanson_check(d, ord, Cmp::exact());
  CHECK(kal.pass);

  auto fp = four_point_check(d, Cmp::exact());
  REQUIRE_FALSE(fp.pass);
  REQUIRE(fp.witness.has_value());
  CHECK(fp.witness->sums == std::array<Rat, 3>{Rat(2), Rat(4), Rat(2)});

  auto found = find_kalmanson_ordering(d, Cmp::exact(), 9);
  REQUIRE(found.has_value());
  CHECK(found->seq() == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("kalmanson witness identifies the failed inequality") {
  auto bad = mat(4, {{0, 2, 2, 3}, {2, 0, 3, 3}, {2, 3, 0, 2}, {3, 3, 2, 0}});
  auto report = kalmanson_check(bad, CircularOrdering::make({1, 2, 3, 4}),
                                Cmp::exact());
  REQUIRE_FALSE(report.pass);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->positions == std::array<int, 4>{0, 1, 2, 3});
  CHECK(report.witness->taxa == std::array<int, 4>{1, 2, 3, 4});
  CHECK(report.witness->inequality == 2);
  CHECK(report.witness->lhs == Rat(6));
  CHECK(report.witness->rhs == Rat(5));
}

TEST_CASE("tolerance absorbs tiny perturbations; exact mode does not") {
  auto rows = std::vector<std::vector<Rat>>{
      {Rat(0), Rat(2), Rat(3) + Rat(1, 1000000000000), Rat(3)},
      {Rat(2), Rat(0), Rat(3), Rat(3)},
      {Rat(3) + Rat(1, 1000000000000), Rat(3), Rat(0), Rat(2)},
      {Rat(3), Rat(3), Rat(2), Rat(0)}};
  auto d = DissimilarityMatrix::make(4, rows);
  CHECK_FALSE(four_point_check(d, Cmp::exact()).pass);
  CHECK(four_point_check(d, Cmp::with_tolerance(1e-9, d)).pass);
}

TEST_CASE("metric_from_network") {
  CHECK(metric_from_network(WeightedSplitSystem::make(4, {})).max_entry() == Rat());

  auto s = [](std::vector<int> v) { return Split::make(4, v); };
  auto sys = WeightedSplitSystem::make(
      4, {{s({1, 2}), Rat(1)}, {s({2, 3}), Rat(1)}});
  auto d = metric_from_network(sys);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) CHECK(d.at(i, j) == crossing().at(i, j));
}

TEST_CASE("recover_split_weights: quartet example") {
  auto fit = recover_split_weights(quartet(), CircularOrdering::make({1, 2, 3, 4}),
                                   Cmp::exact());
  REQUIRE(fit.feasible);
  CHECK(fit.max_residual == Rat());
  auto s = [](std::vector<int> v) { return Split::make(4, v); };
  CHECK(fit.system.weight_of(s({1, 2})) == Rat(1));
  for (int i = 1; i <= 4; ++i)
    CHECK(fit.system.weight_of(s({i})) == Rat(1));
  // The crossing split {14|23} solves to weight 0 and is dropped.
  CHECK(fit.system.size() == 5);
  CHECK_FALSE(fit.system.weight_of(s({2, 3})).has_value());
}

TEST_CASE("recover_split_weights: zero matrix gives the empty system") {
  auto zero = mat(4, {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  auto fit = recover_split_weights(zero, CircularOrdering::make({1, 2, 3, 4}),
                                   Cmp::exact());
  REQUIRE(fit.feasible);
  CHECK(fit.system.size() == 0);
}

TEST_CASE("recover_split_weights: infeasible metric names negative splits") {
  auto d = mat(4, {{0, 3, 1, 1}, {3, 0, 1, 2}, {1, 1, 0, 0}, {1, 2, 0, 0}});
  auto fit = recover_split_weights(d, CircularOrdering::make({1, 2, 3, 4}),
                                   Cmp::exact());
  REQUIRE_FALSE(fit.feasible);
  REQUIRE_FALSE(fit.negative.empty());
  CHECK(fit.negative[0].first == Split::make(4, std::vector<int>{3}));
  CHECK(fit.negative[0].second == Rat(-1, 2));
}

TEST_CASE("recover inverts metric_from_network on random circular systems") {
  std::mt19937_64 rng(20260823);
  for (int it = 0; it < 150; ++it) {
    int n = 4 + static_cast<int>(rng() % 4);  // 4..7
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    auto ord = CircularOrdering::make(perm);
    std::vector<std::pair<Split, Rat>> entries;
    for (int i = 0; i < n; ++i)
      for (int len = 1; len <= n - 1; ++len) {
        if (i + len > n) continue;  // one representative arc per split
        std::vector<int> arc(ord.seq().begin() + i, ord.seq().begin() + i + len);
        if (std::find(arc.begin(), arc.end(), n) != arc.end()) continue;
        if (rng() % 3 == 0) continue;  // sparse support
        entries.push_back({Split::make(n, arc),
                           Rat(static_cast<std::int64_t>(rng() % 7), 4)});
      }
    WeightedSplitSystem sys;
    try {
      sys = WeightedSplitSystem::make(n, entries);
    } catch (const Error&) {
      continue;  // duplicate split from two arc representations
    }
    auto d = metric_from_network(sys);
    auto fit = recover_split_weights(d, ord, Cmp::exact());
    REQUIRE(fit.feasible);
    CHECK(fit.max_residual == Rat());
    CHECK(fit.system == sys);
  }
}

TEST_CASE("scaling preserves check verdicts") {
  auto scale = [](const DissimilarityMatrix& d, const Rat& c) {
    std::vector<std::vector<Rat>> rows;
    for (int i = 1; i <= d.n(); ++i) {
      std::vector<Rat> row;
      for (int j = 1; j <= d.n(); ++j) row.push_back(d.at(i, j) * c);
      rows.push_back(std::move(row));
    }
    return DissimilarityMatrix::make(d.n(), std::move(rows));
  };
  auto q = scale(quartet(), Rat(3, 2));
  CHECK(four_point_check(q, Cmp::exact()).pass);
  auto c = scale(crossing(), Rat(3, 2));
  CHECK(kalmanson_check(c, CircularOrdering::make({1, 2, 3, 4}), Cmp::exact()).pass);
  CHECK_FALSE(four_point_check(c, Cmp::exact()).pass);
}

TEST_CASE("find_kalmanson_ordering capacity bound") {
  CHECK_THROWS_AS(
      find_kalmanson_ordering(
          DissimilarityMatrix::make(
              12, std::vector<std::vector<Rat>>(12, std::vector<Rat>(12))),
          Cmp::exact(), 9),
      Error);
}
