#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "csn/rational.hpp"
#include "csn/splits.hpp"

namespace csn {

// Dual polygonal representation: an n-gon whose edges carry the circular
// ordering, with one diagonal per nontrivial split. A diagonal is identified
// with the taxon bipartition it induces, so twisting changes the ordering
// but never the stored splits.
class PolygonRep {
 public:
  // diagonals must be nontrivial and circular for the ordering. Weights are
  // optional; when given they align with the (sorted) diagonal list.
  static PolygonRep make(const CircularOrdering& ordering, SplitSystem diagonals);
  static PolygonRep make(const CircularOrdering& ordering,
                         const WeightedSplitSystem& weighted);

  const CircularOrdering& ordering() const { return ordering_; }
  const SplitSystem& diagonals() const { return diagonals_; }
  bool weighted() const { return weighted_; }
  const std::vector<Rat>& weights() const { return weights_; }
  WeightedSplitSystem weighted_system() const;

  friend bool operator==(const PolygonRep& a, const PolygonRep& b) {
    return a.ordering_ == b.ordering_ && a.diagonals_ == b.diagonals_ &&
           a.weighted_ == b.weighted_ && a.weights_ == b.weights_;
  }
  friend bool operator!=(const PolygonRep& a, const PolygonRep& b) {
    return !(a == b);
  }

  friend PolygonRep twist(const PolygonRep& p, const Split& axis,
                          std::optional<Mask> side);

 private:
  PolygonRep(CircularOrdering ord, SplitSystem diag, bool w, std::vector<Rat> ws)
      : ordering_(std::move(ord)),
        diagonals_(std::move(diag)),
        weighted_(w),
        weights_(std::move(ws)) {}
  CircularOrdering ordering_;
  SplitSystem diagonals_;
  bool weighted_;
  std::vector<Rat> weights_;  // aligned with diagonals_ when weighted_
};

bool diagonals_cross(const Split& a, const Split& b);

// Reverses one side's arc of the ordering; the split system is unchanged.
// side (when given) must equal the axis block or its complement; the default
// is the side not containing taxon 1. The axis must be a nontrivial split,
// a chord of the current ordering, and must cross no stored diagonal.
PolygonRep twist(const PolygonRep& p, const Split& axis,
                 std::optional<Mask> side = std::nullopt);

struct TwistMove {
  Split axis;
  Mask side;  // the arc that was reversed

  friend bool operator==(const TwistMove& a, const TwistMove& b) {
    return a.axis == b.axis && a.side == b.side;
  }
};

struct TwistPath {
  std::vector<TwistMove> moves;
};

struct IncompatibleOrdering {};

// Twist path from p's representation to the one with ordering target.
// Returns the incompatibility verdict when target is not circular for p's
// splits; otherwise at most n-2 twists, each axis legal at the moment it is
// applied.
std::variant<TwistPath, IncompatibleOrdering> twist_sequence(
    const PolygonRep& p, const CircularOrdering& target);

// (start position, length) of the arc occupied by the split's block;
// requires the split to be circular for ord.
std::pair<int, int> block_arc(const Split& s, const CircularOrdering& ord);

// All (n-1)!/2 canonical orderings in lexicographic order; capacity error
// above n_max.
const std::vector<CircularOrdering>& enumerate_orderings(int n, int n_max);

// Canonical orderings for which every split of sys is circular.
std::vector<CircularOrdering> compatible_orderings(const SplitSystem& sys,
                                                   int n_max);

}  // namespace csn
