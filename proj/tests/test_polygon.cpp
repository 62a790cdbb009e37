#include <doctest.h>

#include <algorithm>
#include <random>
#include <variant>
#include <vector>

#include "csn/errors.hpp"
#include "csn/polygon.hpp"
#include "csn/splits.hpp"

using namespace csn;

namespace {

Split sp(int n, std::vector<int> v) { return Split::make(n, v); }

SplitSystem sys6(std::vector<std::vector<int>> blocks) {
  std::vector<Split> s;
  for (auto& b : blocks) s.push_back(sp(6, b));
  return SplitSystem::make(6, s);
}

PolygonRep replay(PolygonRep p, const TwistPath& path) {
  for (const TwistMove& mv : path.moves) p = twist(p, mv.axis, mv.side);
  return p;
}

}  // namespace

TEST_CASE("polygon representation construction") {
  auto ord = CircularOrdering::make({1, 2, 3, 4, 5, 6});
  CHECK_NOTHROW(PolygonRep::make(ord, sys6({{1, 2, 3}})));

  // Maximal pentagon system: all n(n-3)/2 = 5 diagonals.
  auto p5 = CircularOrdering::make({1, 2, 3, 4, 5});
  std::vector<Split> all5;
  for (auto b : std::vector<std::vector<int>>{
           {1, 2}, {2, 3}, {3, 4}, {1, 2, 3}, {2, 3, 4}})
    all5.push_back(sp(5, b));
  CHECK_NOTHROW(PolygonRep::make(p5, SplitSystem::make(5, all5)));

  CHECK_THROWS_AS(PolygonRep::make(ord, sys6({{1, 3, 5}})), Error);  // not circular
  CHECK_THROWS_AS(
      PolygonRep::make(ord, SplitSystem::make(6, {sp(6, {1})})), Error);
}

TEST_CASE("diagonals_cross") {
  CHECK_FALSE(diagonals_cross(sp(5, {1, 2}), sp(5, {4, 5})));
  CHECK(diagonals_cross(sp(5, {1, 2}), sp(5, {2, 3})));
  CHECK_FALSE(diagonals_cross(sp(5, {1, 2}), sp(5, {1, 2})));
}

TEST_CASE("block_arc finds contiguous runs, including wrapping ones") {
  auto ord = CircularOrdering::make({1, 2, 3, 4, 5});
  CHECK(block_arc(sp(5, {1, 2}), ord) == std::pair<int, int>{0, 2});
  CHECK(block_arc(sp(5, {3, 4}), ord) == std::pair<int, int>{2, 2});
  auto wrap = CircularOrdering::make({1, 2, 5, 4, 3});
  CHECK(wrap.seq() == std::vector<int>{1, 2, 5, 4, 3});
  CHECK(block_arc(sp(5, {1, 3}), wrap) == std::pair<int, int>{4, 2});
}

TEST_CASE("twist: hexagon example and involution") {
  auto ord = CircularOrdering::make({1, 2, 3, 4, 5, 6});
  auto p = PolygonRep::make(ord, sys6({{1, 2, 3}}));
  auto axis = sp(6, {1, 2, 3});

  auto q = twist(p, axis, taxa_to_mask({1, 2, 3}, 6));
  CHECK(q.ordering().seq() == std::vector<int>{1, 2, 3, 6, 5, 4});
  CHECK(q.diagonals() == p.diagonals());

  // Default side is the one without taxon 1; same canonical result here.
  CHECK(twist(p, axis) == q);

  CHECK(replay(q, TwistPath{{TwistMove{axis, taxa_to_mask({1, 2, 3}, 6)}}}) == p);
}

TEST_CASE("twist: auxiliary chords are legal, crossing axes are not") {
  auto ord = CircularOrdering::make({1, 2, 3, 4, 5, 6});
  auto p = PolygonRep::make(ord, sys6({{1, 2, 3}}));

  // {1,2} crosses nothing stored: legal auxiliary chord.
  auto q = twist(p, sp(6, {1, 2}));
  CHECK(q.diagonals() == p.diagonals());

  try {
    twist(p, sp(6, {2, 3, 4}));
    FAIL("expected illegal twist");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::illegal_twist);
    CHECK(std::string(e.what()).find("1,2,3") != std::string::npos);
  }

  CHECK_THROWS_AS(twist(p, sp(6, {1})), Error);          // trivial
  CHECK_THROWS_AS(twist(p, sp(6, {1, 3})), Error);       // not a chord
  CHECK_THROWS_AS(twist(p, sp(6, {1, 2}), Mask(0b111)), Error);  // bad side
}

TEST_CASE("twist preserves the split system on random instances") {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 300; ++it) {
    int n = 4 + static_cast<int>(rng() % 3);
    const auto& all = enumerate_orderings(n, 9);
    auto ord = all[rng() % all.size()];
    // Random subset of the chamber's arcs.
    std::vector<Split> chosen;
    for (int i = 0; i < n; ++i)
      for (int len = 2; len <= n - 2; ++len) {
        std::vector<int> arc;
        for (int k = 0; k < len; ++k) arc.push_back(ord.at((i + k) % n));
        if (rng() % 2) chosen.push_back(Split::make(n, arc));
      }
    auto p = PolygonRep::make(ord, SplitSystem::make(n, chosen));
    // Pick any legal axis among the chamber's arcs.
    std::vector<Split> legal;
    for (int i = 0; i < n; ++i)
      for (int len = 2; len <= n - 2; ++len) {
        std::vector<int> arc;
        for (int k = 0; k < len; ++k) arc.push_back(ord.at((i + k) % n));
        Split axis = Split::make(n, arc);
        bool ok = true;
        for (const Split& d : p.diagonals().splits())
          if (d != axis && diagonals_cross(axis, d)) ok = false;
        if (ok) legal.push_back(axis);
      }
    if (legal.empty()) continue;
    auto q = twist(p, legal[rng() % legal.size()]);
    CHECK(q.diagonals() == p.diagonals());
  }
}

TEST_CASE("twist_sequence: trivial, single-step, and incompatible cases") {
  auto ord = CircularOrdering::make({1, 2, 3, 4, 5, 6});
  auto p = PolygonRep::make(ord, sys6({{1, 2, 3}}));

  auto same = twist_sequence(p, ord);
  REQUIRE(std::holds_alternative<TwistPath>(same));
  CHECK(std::get<TwistPath>(same).moves.empty());

  auto target = CircularOrdering::make({3, 2, 1, 4, 5, 6});
  auto one = twist_sequence(p, target);
  REQUIRE(std::holds_alternative<TwistPath>(one));
  CHECK(std::get<TwistPath>(one).moves.size() == 1);
  CHECK(replay(p, std::get<TwistPath>(one)).ordering() == target);

  auto p5 = CircularOrdering::make({1, 2, 3, 4, 5});
  std::vector<Split> all5;
  for (auto b : std::vector<std::vector<int>>{
           {1, 2}, {2, 3}, {3, 4}, {1, 2, 3}, {2, 3, 4}})
    all5.push_back(Split::make(5, b));
  auto rigid = PolygonRep::make(p5, SplitSystem::make(5, all5));
  auto other = twist_sequence(rigid, CircularOrdering::make({1, 2, 4, 3, 5}));
  CHECK(std::holds_alternative<IncompatibleOrdering>(other));
}

TEST_CASE("twist_sequence reaches exactly the compatible orderings") {
  for (int n : {5, 6}) {
    std::vector<SplitSystem> systems;
    if (n == 5) {
      systems.push_back(SplitSystem::make(5, {sp(5, {1, 2})}));
      systems.push_back(
          SplitSystem::make(5, {sp(5, {1, 2}), sp(5, {1, 2, 3})}));
      systems.push_back(SplitSystem::make(5, {}));
    } else {
      systems.push_back(sys6({{1, 2, 3}}));
      systems.push_back(sys6({{1, 2}, {1, 2, 3}, {5, 6}}));
      systems.push_back(sys6({{2, 3}, {2, 3, 4, 5}}));
    }
    for (const auto& sys : systems) {
      auto compat = compatible_orderings(sys, 9);
      REQUIRE_FALSE(compat.empty());
      auto p = PolygonRep::make(compat.front(), sys);
      for (const auto& target : enumerate_orderings(n, 9)) {
        auto res = twist_sequence(p, target);
        bool expect =
            std::find(compat.begin(), compat.end(), target) != compat.end();
        if (!expect) {
          CHECK(std::holds_alternative<IncompatibleOrdering>(res));
          continue;
        }
        REQUIRE(std::holds_alternative<TwistPath>(res));
        const auto& path = std::get<TwistPath>(res);
        CHECK(static_cast<int>(path.moves.size()) <= 2 * (n - 2));
        auto q = replay(p, path);
        CHECK(q.ordering() == target);
        CHECK(q.diagonals() == p.diagonals());
      }
    }
  }
}

TEST_CASE("compatible_orderings counts") {
  CHECK(compatible_orderings(sys6({{1, 2, 3}}), 9).size() == 18);
  CHECK(enumerate_orderings(6, 9).size() == 60);
  CHECK(enumerate_orderings(5, 9).size() == 12);

  auto p5all = std::vector<Split>{sp(5, {1, 2}), sp(5, {2, 3}), sp(5, {3, 4}),
                                  sp(5, {1, 2, 3}), sp(5, {2, 3, 4})};
  CHECK(compatible_orderings(SplitSystem::make(5, p5all), 9).size() == 1);
  CHECK(compatible_orderings(SplitSystem::make(4, {}), 9).size() == 3);
}

TEST_CASE("enumerate_orderings is lexicographic and capacity-bounded") {
  const auto& v4 = enumerate_orderings(4, 9);
  REQUIRE(v4.size() == 3);
  CHECK(v4[0].seq() == std::vector<int>{1, 2, 3, 4});
  CHECK(v4[1].seq() == std::vector<int>{1, 2, 4, 3});
  CHECK(v4[2].seq() == std::vector<int>{1, 3, 2, 4});
  CHECK(std::is_sorted(v4.begin(), v4.end()));

  CHECK_THROWS_AS(enumerate_orderings(10, 9), Error);
  try {
    enumerate_orderings(11, 11);  // hard cap applies even above n_max
    FAIL("expected capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::capacity);
  }
}
