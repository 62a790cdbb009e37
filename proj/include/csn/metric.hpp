#pragma once

#include <array>
#include <optional>
#include <vector>

#include "csn/rational.hpp"
#include "csn/splits.hpp"

namespace csn {

// Symmetric, zero-diagonal, nonnegative rational dissimilarity matrix over
// taxa 1..n.
class DissimilarityMatrix {
 public:
  static DissimilarityMatrix make(int n, std::vector<std::vector<Rat>> rows);

  int n() const { return n_; }
  const Rat& at(int i, int j) const { return a_[(i - 1) * n_ + (j - 1)]; }
  Rat max_entry() const;

 private:
  DissimilarityMatrix(int n, std::vector<Rat> a) : n_(n), a_(std::move(a)) {}
  int n_;
  std::vector<Rat> a_;  // row-major
};

// Comparison policy shared by all checks: exact rational comparisons, or a
// fixed absolute slack (tolerance scaled by the matrix's largest entry).
// Ties always pass.
class Cmp {
 public:
  static Cmp exact() { return Cmp(true, 0.0); }
  static Cmp with_tolerance(double tol, const DissimilarityMatrix& d);

  bool is_exact() const { return exact_; }
  double slack() const { return slack_; }

  // a <= b up to slack.
  bool leq(const Rat& a, const Rat& b) const;
  bool eq(const Rat& a, const Rat& b) const;

 private:
  Cmp(bool e, double s) : exact_(e), slack_(s) {}
  bool exact_;
  double slack_;
};

struct FourPointWitness {
  std::array<int, 4> taxa;  // i < j < k < l
  std::array<Rat, 3> sums;  // d(i,j)+d(k,l), d(i,k)+d(j,l), d(i,l)+d(j,k)
};

struct FourPointReport {
  bool pass;
  std::optional<FourPointWitness> witness;  // lex-least violating quadruple
};

// Tree-metric test: for every quadruple the maximum of the three pair sums
// is attained at least twice.
FourPointReport four_point_check(const DissimilarityMatrix& d, const Cmp& cmp);

struct KalmansonWitness {
  std::array<int, 4> positions;  // p < q < r < s in the ordering
  std::array<int, 4> taxa;
  int inequality;  // 1 or 2
  Rat lhs;
  Rat rhs;
};

struct KalmansonReport {
  bool pass;
  std::optional<KalmansonWitness> witness;
};

// Circular-metric test for a given ordering: for positions p<q<r<s,
//   d(p,q)+d(r,s) <= d(p,r)+d(q,s)   and   d(p,s)+d(q,r) <= d(p,r)+d(q,s).
KalmansonReport kalmanson_check(const DissimilarityMatrix& d,
                                const CircularOrdering& ord, const Cmp& cmp);

// Lexicographically first canonical ordering passing kalmanson_check, if any.
// Brute force over (n-1)!/2 orderings; n above the bound is a capacity error.
std::optional<CircularOrdering> find_kalmanson_ordering(
    const DissimilarityMatrix& d, const Cmp& cmp, int n_max);

// d(i,j) = sum of weights of splits separating i and j.
DissimilarityMatrix metric_from_network(const WeightedSplitSystem& sys);

struct FitReport {
  bool feasible;
  WeightedSplitSystem system;          // nonnegative part, zeros dropped
  std::vector<std::pair<Split, Rat>> negative;  // offending splits when infeasible
  Rat max_residual;                    // max |d - metric(system)| entrywise
};

// Exact split-weight recovery for a given circular ordering via isolation
// indices: for the arc x_i..x_j (positions 1 <= i <= j <= n-1),
//   w = (d(x_{i-1},x_j) + d(x_i,x_{j+1}) - d(x_{i-1},x_{j+1}) - d(x_i,x_j)) / 2.
// The n(n-1)/2 arc splits are linearly independent, so the expansion is the
// unique exact solution; the metric is circular for ord iff all weights are
// nonnegative (up to the comparison slack).
FitReport recover_split_weights(const DissimilarityMatrix& d,
                                const CircularOrdering& ord, const Cmp& cmp);

}  // namespace csn
