#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csn/rational.hpp"

namespace csn {

// Taxa are 1-based integers 1..n. Subsets are bitmasks with bit i-1
// representing taxon i.
using Mask = std::uint32_t;

constexpr int kMaskTaxaLimit = 31;

Mask full_mask(int n);
std::vector<int> mask_to_taxa(Mask m);
Mask taxa_to_mask(const std::vector<int>& taxa, int n);
std::string block_key(Mask m);  // "1,2,5"

// A split {A, B} of {1..n}, stored canonically: the block is the side not
// containing taxon n, listed as a strictly ascending sequence.
class Split {
 public:
  // Canonicalizes; either side of the bipartition may be given.
  static Split make(int n, Mask side);
  static Split make(int n, const std::vector<int>& side);

  int n() const { return n_; }
  Mask block() const { return block_; }
  Mask coblock() const;
  std::vector<int> block_taxa() const { return mask_to_taxa(block_); }
  int block_size() const;
  bool is_trivial() const;
  std::string key() const { return block_key(block_); }

  // Lexicographic order on canonical blocks as ascending sequences.
  friend bool operator<(const Split& a, const Split& b);
  friend bool operator==(const Split& a, const Split& b) {
    return a.n_ == b.n_ && a.block_ == b.block_;
  }
  friend bool operator!=(const Split& a, const Split& b) { return !(a == b); }

 private:
  Split(int n, Mask block) : n_(n), block_(block) {}
  int n_;
  Mask block_;
};

// One of the four pairwise intersections is empty.
bool pairwise_compatible(const Split& a, const Split& b);

// A circular (cyclic, reflection-free) ordering of 1..n, stored canonically:
// starts with taxon 1 and the second element is smaller than the last.
class CircularOrdering {
 public:
  static CircularOrdering make(const std::vector<int>& seq);

  int n() const { return static_cast<int>(seq_.size()); }
  const std::vector<int>& seq() const { return seq_; }
  int at(int pos) const { return seq_[pos]; }

  friend bool operator<(const CircularOrdering& a, const CircularOrdering& b) {
    return a.seq_ < b.seq_;
  }
  friend bool operator==(const CircularOrdering& a, const CircularOrdering& b) {
    return a.seq_ == b.seq_;
  }
  friend bool operator!=(const CircularOrdering& a, const CircularOrdering& b) {
    return !(a == b);
  }

 private:
  explicit CircularOrdering(std::vector<int> seq) : seq_(std::move(seq)) {}
  std::vector<int> seq_;
};

// Canonical form of an arbitrary cyclic sequence of 1..n.
std::vector<int> canonical_cycle(const std::vector<int>& seq);

// The split's block occupies a contiguous arc of the ordering.
bool is_circular(const Split& s, const CircularOrdering& ord);

class SplitSystem {
 public:
  SplitSystem() : n_(0) {}
  // Sorts and deduplicates; all splits must share the ambient n.
  static SplitSystem make(int n, std::vector<Split> splits);

  int n() const { return n_; }
  const std::vector<Split>& splits() const { return splits_; }
  std::size_t size() const { return splits_.size(); }
  bool contains(const Split& s) const;

  bool pairwise_compatible_all() const;
  // First (lex) incompatible pair, if any.
  std::optional<std::pair<Split, Split>> first_incompatible_pair() const;

  friend bool operator==(const SplitSystem& a, const SplitSystem& b) {
    return a.n_ == b.n_ && a.splits_ == b.splits_;
  }
  friend bool operator!=(const SplitSystem& a, const SplitSystem& b) {
    return !(a == b);
  }

 private:
  int n_;
  std::vector<Split> splits_;
};

bool is_circular(const SplitSystem& sys, const CircularOrdering& ord);

// Splits paired with positive rational weights, sorted by split.
// Zero-weight entries are dropped on construction; negative weights are
// malformed.
class WeightedSplitSystem {
 public:
  WeightedSplitSystem() : n_(0) {}
  static WeightedSplitSystem make(int n, std::vector<std::pair<Split, Rat>> entries);

  int n() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<Split, Rat>>& entries() const { return entries_; }
  SplitSystem support() const;
  std::optional<Rat> weight_of(const Split& s) const;

  friend bool operator==(const WeightedSplitSystem& a, const WeightedSplitSystem& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const WeightedSplitSystem& a, const WeightedSplitSystem& b) {
    return !(a == b);
  }

 private:
  int n_;
  std::vector<std::pair<Split, Rat>> entries_;
};

// Unrooted tree with leaves 1..n and internal vertices n+1..; every internal
// vertex has degree >= 3, every edge carries the split of leaves it induces.
struct TreeEdge {
  int u;
  int v;
  Rat length;
  Split split;
};

class LeafLabeledTree {
 public:
  int n() const { return n_; }
  int vertex_count() const { return vertex_count_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }

  // Path metric between leaves (sum of edge lengths).
  Rat leaf_distance(int i, int j) const;
  // Nontrivial splits induced by internal edges, sorted.
  SplitSystem internal_splits() const;

 private:
  friend LeafLabeledTree buneman_tree(const WeightedSplitSystem& sys);
  int n_ = 0;
  int vertex_count_ = 0;
  std::vector<TreeEdge> edges_;
};

// Builds the split tree of a pairwise compatible weighted system by
// inserting one split at a time into a star. Missing trivial splits become
// zero-length pendant edges. Throws on incompatible input, naming the first
// offending pair.
LeafLabeledTree buneman_tree(const WeightedSplitSystem& sys);

}  // namespace csn
