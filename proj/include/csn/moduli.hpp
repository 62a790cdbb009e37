#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csn/associahedron.hpp"
#include "csn/rational.hpp"
#include "csn/splits.hpp"

namespace csn {

// Image point of the Catalan embedding: nonnegative coordinates on the
// chords of one chamber, summing to 1. Coordinates are indexed by
// all_chords(n) order.
class EmbeddedPoint {
 public:
  static EmbeddedPoint make(const CircularOrdering& chamber,
                            std::vector<Rat> coords);

  const CircularOrdering& chamber() const { return chamber_; }
  const std::vector<Rat>& coords() const { return coords_; }
  int n() const { return chamber_.n(); }

  // Coordinates over all delta(n) splits (chords of other chambers are 0),
  // indexed by split_index.
  std::vector<Rat> dense() const;

  friend bool operator==(const EmbeddedPoint& a, const EmbeddedPoint& b) {
    return a.chamber_ == b.chamber_ && a.coords_ == b.coords_;
  }
  friend bool operator!=(const EmbeddedPoint& a, const EmbeddedPoint& b) {
    return !(a == b);
  }

 private:
  EmbeddedPoint(CircularOrdering c, std::vector<Rat> x)
      : chamber_(std::move(c)), coords_(std::move(x)) {}
  CircularOrdering chamber_;
  std::vector<Rat> coords_;
};

// Strictly increasing chain of faces of one chamber's associahedron; the
// bottom face may be empty.
class Subflag {
 public:
  static Subflag make(const CircularOrdering& chamber,
                      std::vector<std::vector<Chord>> faces);

  const CircularOrdering& chamber() const { return chamber_; }
  const std::vector<std::vector<Chord>>& faces() const { return faces_; }
  int size() const { return static_cast<int>(faces_.size()); }

  friend bool operator==(const Subflag& a, const Subflag& b) {
    return a.chamber_ == b.chamber_ && a.faces_ == b.faces_;
  }
  friend bool operator!=(const Subflag& a, const Subflag& b) { return !(a == b); }

 private:
  Subflag(CircularOrdering c, std::vector<std::vector<Chord>> f)
      : chamber_(std::move(c)), faces_(std::move(f)) {}
  CircularOrdering chamber_;
  std::vector<std::vector<Chord>> faces_;
};

// Convex combination of face images along a subflag: positive coefficients
// summing to 1, one per face.
class ModuliPoint {
 public:
  static ModuliPoint make(Subflag flag, std::vector<Rat> coefficients);

  const Subflag& flag() const { return flag_; }
  const std::vector<Rat>& coefficients() const { return coefficients_; }

  friend bool operator==(const ModuliPoint& a, const ModuliPoint& b) {
    return a.flag_ == b.flag_ && a.coefficients_ == b.coefficients_;
  }
  friend bool operator!=(const ModuliPoint& a, const ModuliPoint& b) {
    return !(a == b);
  }

 private:
  ModuliPoint(Subflag f, std::vector<Rat> c)
      : flag_(std::move(f)), coefficients_(std::move(c)) {}
  Subflag flag_;
  std::vector<Rat> coefficients_;
};

// Vertex embedding: 1/(n-3) on the triangulation's chords, 0 elsewhere.
EmbeddedPoint phi_vertex(const CircularOrdering& chamber,
                         const std::vector<Chord>& triangulation);

// Face embedding, closed form. For chord d and face f:
//   1/(n-3) if d is in f; 0 if d crosses f; else
//   (1/(n-3)) * C_{s-2} C_{t-2} / C_{s+t-4}
// where d splits its region of f into an s-gon and a t-gon. Equals the
// centroid of the extending triangulations' vertex embeddings.
EmbeddedPoint phi_face(const CircularOrdering& chamber,
                       const std::vector<Chord>& face);

EmbeddedPoint phi_point(const ModuliPoint& p);

// Affine dimension of the embedded face images of the subflag.
int flag_simplex_dim(const Subflag& flag);

struct DecodeResult {
  bool ok;
  std::optional<ModuliPoint> point;
  std::string failure;  // names the failed test when !ok
};

// Inverts phi_point on the image; any point off the image fails one of the
// reconstruction tests, which the report names.
DecodeResult decode(const EmbeddedPoint& x);

struct FaceClass {
  SplitSystem splits;
  int dim;                   // n-3 - |splits|
  std::vector<int> members;  // chamber indices, ascending
};

struct Atlas {
  int n;
  std::vector<CircularOrdering> chambers;
  std::vector<FaceClass> classes;
};

// Gluing of the (n-1)!/2 associahedra: faces (chamber, f) are identified
// when twists along f's own diagonals carry one chamber to the other.
Atlas glue_moduli(int n, int n_max);

// Identified faces have equal dense embeddings.
bool atlas_phi_consistent(const Atlas& atlas);

}  // namespace csn
