#include "csn/metric.hpp"

#include <algorithm>
#include <cmath>

#include "csn/errors.hpp"
#include "csn/polygon.hpp"

namespace csn {

DissimilarityMatrix DissimilarityMatrix::make(int n,
                                              std::vector<std::vector<Rat>> rows) {
  if (n < 3) fail(ErrKind::malformed_input, "matrix needs at least 3 taxa");
  if (n > kMaskTaxaLimit)
    fail(ErrKind::capacity, "taxa count " + std::to_string(n) + " unsupported");
  if (static_cast<int>(rows.size()) != n)
    fail(ErrKind::malformed_input, "expected " + std::to_string(n) + " rows, got " +
                                       std::to_string(rows.size()));
  std::vector<Rat> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      fail(ErrKind::malformed_input,
           "row " + std::to_string(i + 1) + " has " +
               std::to_string(rows[i].size()) + " entries, expected " +
               std::to_string(n));
    for (int j = 0; j < n; ++j) a[i * n + j] = rows[i][j];
  }
  for (int i = 0; i < n; ++i) {
    if (!a[i * n + i].is_zero())
      fail(ErrKind::malformed_input,
           "nonzero diagonal at row " + std::to_string(i + 1));
    for (int j = 0; j < n; ++j) {
      if (a[i * n + j].is_negative())
        fail(ErrKind::malformed_input,
             "negative entry at (" + std::to_string(i + 1) + "," +
                 std::to_string(j + 1) + ")");
      if (a[i * n + j] != a[j * n + i])
        fail(ErrKind::malformed_input,
             "matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                 std::to_string(j + 1) + ")");
    }
  }
  return DissimilarityMatrix(n, std::move(a));
}

Rat DissimilarityMatrix::max_entry() const {
  Rat m(0);
  for (const Rat& x : a_)
    if (m < x) m = x;
  return m;
}

Cmp Cmp::with_tolerance(double tol, const DissimilarityMatrix& d) {
  if (!(tol >= 0.0))
    fail(ErrKind::malformed_input, "tolerance must be nonnegative");
  return Cmp(false, tol * std::max(1.0, d.max_entry().to_double()));
}

bool Cmp::leq(const Rat& a, const Rat& b) const {
  if (exact_) return a <= b;
  return a.to_double() <= b.to_double() + slack_;
}

bool Cmp::eq(const Rat& a, const Rat& b) const {
  if (exact_) return a == b;
  return std::abs(a.to_double() - b.to_double()) <= slack_;
}

FourPointReport four_point_check(const DissimilarityMatrix& d, const Cmp& cmp) {
  int n = d.n();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          std::array<Rat, 3> sums = {d.at(i, j) + d.at(k, l),
                                     d.at(i, k) + d.at(j, l),
                                     d.at(i, l) + d.at(j, k)};
          Rat hi = sums[0];
          for (int t = 1; t < 3; ++t)
            if (hi < sums[t]) hi = sums[t];
          int attained = 0;
          for (int t = 0; t < 3; ++t)
            if (cmp.eq(sums[t], hi)) ++attained;
          if (attained < 2)
            return {false, FourPointWitness{{i, j, k, l}, sums}};
        }
  return {true, std::nullopt};
}

KalmansonReport kalmanson_check(const DissimilarityMatrix& d,
                                const CircularOrdering& ord, const Cmp& cmp) {
  if (d.n() != ord.n())
    fail(ErrKind::ambient_mismatch, "matrix and ordering over different taxa sets");
  int n = d.n();
  auto t = [&](int pos) { return ord.at(pos); };
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      for (int r = q + 1; r < n; ++r)
        for (int s = r + 1; s < n; ++s) {
          Rat rhs = d.at(t(p), t(r)) + d.at(t(q), t(s));
          Rat lhs1 = d.at(t(p), t(q)) + d.at(t(r), t(s));
          if (!cmp.leq(lhs1, rhs))
            return {false, KalmansonWitness{{p, q, r, s},
                                            {t(p), t(q), t(r), t(s)},
                                            1,
                                            lhs1,
                                            rhs}};
          Rat lhs2 = d.at(t(p), t(s)) + d.at(t(q), t(r));
          if (!cmp.leq(lhs2, rhs))
            return {false, KalmansonWitness{{p, q, r, s},
                                            {t(p), t(q), t(r), t(s)},
                                            2,
                                            lhs2,
                                            rhs}};
        }
  return {true, std::nullopt};
}

std::optional<CircularOrdering> find_kalmanson_ordering(
    const DissimilarityMatrix& d, const Cmp& cmp, int n_max) {
  for (const CircularOrdering& ord : enumerate_orderings(d.n(), n_max))
    if (kalmanson_check(d, ord, cmp).pass) return ord;
  return std::nullopt;
}

DissimilarityMatrix metric_from_network(const WeightedSplitSystem& sys) {
  int n = sys.n();
  std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(n, Rat(0)));
  for (const auto& [s, w] : sys.entries()) {
    Mask block = s.block();
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        bool bi = (block >> (i - 1)) & 1;
        bool bj = (block >> (j - 1)) & 1;
        if (bi != bj) {
          rows[i - 1][j - 1] += w;
          rows[j - 1][i - 1] += w;
        }
      }
  }
  return DissimilarityMatrix::make(n, std::move(rows));
}

FitReport recover_split_weights(const DissimilarityMatrix& d,
                                const CircularOrdering& ord, const Cmp& cmp) {
  if (d.n() != ord.n())
    fail(ErrKind::ambient_mismatch, "matrix and ordering over different taxa sets");
  int n = d.n();
  auto t = [&](int pos) { return ord.at(((pos % n) + n) % n); };

  // Each split circular for ord is an arc x_i..x_j with 1 <= i <= j <= n-1
  // (the complement holds position 0), exactly once.
  std::vector<std::pair<Split, Rat>> weights;
  Rat half(1, 2);
  for (int i = 1; i <= n - 1; ++i) {
    Mask arc = 0;
    for (int j = i; j <= n - 1; ++j) {
      arc |= Mask(1) << (t(j) - 1);
      Rat w = (d.at(t(i - 1), t(j)) + d.at(t(i), t(j + 1)) -
               d.at(t(i - 1), t(j + 1)) - d.at(t(i), t(j))) *
              half;
      weights.emplace_back(Split::make(n, arc), w);
    }
  }

  std::vector<std::pair<Split, Rat>> negative;
  std::vector<std::pair<Split, Rat>> positive;
  for (auto& [s, w] : weights) {
    if (w.is_negative()) {
      if (cmp.leq(Rat(0), w)) continue;  // within slack of zero
      negative.emplace_back(s, w);
    } else if (!w.is_zero()) {
      positive.emplace_back(s, w);
    }
  }
  std::sort(negative.begin(), negative.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  WeightedSplitSystem fitted = WeightedSplitSystem::make(n, std::move(positive));
  DissimilarityMatrix back = metric_from_network(fitted);
  Rat residual(0);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      Rat diff = (d.at(i, j) - back.at(i, j)).abs();
      if (residual < diff) residual = diff;
    }

  bool feasible = negative.empty() && cmp.eq(residual, Rat(0));
  return FitReport{feasible, std::move(fitted), std::move(negative), residual};
}

}  // namespace csn
