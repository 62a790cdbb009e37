#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csn/polygon.hpp"
#include "csn/rational.hpp"
#include "csn/splits.hpp"

namespace csn {

// delta(n) = 2^(n-1) - n - 1, the number of nontrivial splits of n taxa.
std::int64_t delta(int n);

// All nontrivial splits in lexicographic order (cached per n).
const std::vector<Split>& all_nontrivial_splits(int n);

// Rank of a nontrivial split in the lexicographic order; inverse below.
std::int64_t split_index(const Split& s);
Split split_at(int n, std::int64_t index);

// A point of the network space: positive weights on a jointly circular set
// of nontrivial splits.
class NetworkPoint {
 public:
  // Validates joint circularity by ordering search (capacity-bounded).
  static NetworkPoint make(const WeightedSplitSystem& sys, int n_max);
  // Trusted constructor: support already known circular for ord.
  static NetworkPoint from_polygon(const PolygonRep& p);

  int n() const { return coords_.n(); }
  const WeightedSplitSystem& coords() const { return coords_; }

 private:
  explicit NetworkPoint(WeightedSplitSystem c) : coords_(std::move(c)) {}
  WeightedSplitSystem coords_;
};

NetworkPoint to_network_point(const PolygonRep& p);

// The support is pairwise compatible (the point lies in tree space).
bool in_tree_subspace(const NetworkPoint& x);

// Chambers of the link complex = canonical circular orderings.
const std::vector<CircularOrdering>& chambers(int n, int n_max);

// The n(n-3)/2 nontrivial splits circular for ord.
SplitSystem chamber_support(const CircularOrdering& ord);

// Cells of dimension k of the link complex: nonempty subsets of size k+1 of
// some chamber's support, deduplicated, ordered by their split-index sets.
std::vector<SplitSystem> link_cells(int n, int k, int n_max);

std::vector<CircularOrdering> chambers_containing(const SplitSystem& cell,
                                                  int n_max);

// max over chamber pairs of (shared cell dimension).
int max_shared_face_dim(int n, int n_max);

// Lex-least triple of splits that is pairwise jointly circular but has no
// common ordering; nullopt if the complex is flag at this n.
std::optional<std::array<Split, 3>> empty_triangle_witness(int n, int n_max);

// Relabeling-invariant type key: minimum over compatible orderings and
// dihedral frames of the cell's position diagram.
std::string classify_cell(const SplitSystem& cell, int n_max);

struct Census {
  int n;
  int dim;                      // n(n-3)/2 - 1
  std::int64_t chambers;        // (n-1)!/2
  std::int64_t vertices;        // delta(n)
  std::int64_t edges;           // C(delta, 2)
  std::optional<std::int64_t> ridges_formula;  // chambers*(dim+1), n > 4 only
  bool enumerated;              // true when n <= 7
  std::vector<std::int64_t> cells_by_dim;      // enumerated, index = dimension
  std::int64_t ridges_enumerated = 0;
  std::int64_t compatible_pairs = 0;  // 1-skeleton edges with noncrossing splits
  std::int64_t crossing_pairs = 0;
};

// Formula census for any n (capacity-checked), enumerated counts for n <= 7.
Census census(int n, int n_max);

}  // namespace csn
