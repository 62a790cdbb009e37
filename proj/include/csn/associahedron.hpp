#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csn/splits.hpp"

namespace csn {

// Combinatorics of the associahedron K_{n-1} realized on an n-gon whose
// edges 0..n-1 carry the circular ordering (edge i joins vertices i and
// i+1 mod n). A chord (a,b) between vertices cuts edges a..b-1 from the
// rest; chords are exactly the nontrivial splits of the labeling.
struct Chord {
  int a;
  int b;  // 0 <= a < b <= n-1, 2 <= b-a <= n-2

  friend bool operator<(const Chord& x, const Chord& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  }
  friend bool operator==(const Chord& x, const Chord& y) {
    return x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const Chord& x, const Chord& y) { return !(x == y); }
};

std::int64_t catalan(int k);  // k <= 32

const std::vector<Chord>& all_chords(int n);

bool chords_cross(const Chord& x, const Chord& y);

// Split induced by a chord under a labeling.
Split chord_split(const Chord& c, const CircularOrdering& labeling);
// Chord occupied by a nontrivial split circular for the labeling.
Chord split_chord(const Split& s, const CircularOrdering& labeling);

// Faces of K_{n-1} with k diagonals = noncrossing k-subsets of chords, in
// lexicographic order. k = n-3 gives the triangulations (vertices).
const std::vector<std::vector<Chord>>& noncrossing_sets(int n, int k);

// Number of faces with k diagonals:
// D(n,k) = C(n-3,k) * C(n+k-1,k) / (k+1).
std::int64_t dissection_count(int n, int k);

// Triangulations extending a face.
std::vector<std::vector<Chord>> extending_triangulations(int n,
                                                         const std::vector<Chord>& face);

// Subpolygons cut out by a noncrossing chord set; each region is its vertex
// cycle in polygon order.
std::vector<std::vector<int>> regions(int n, const std::vector<Chord>& face);

// Maximal chains of nested faces (empty set up to a triangulation);
// count per labeling is catalan(n-2) * (n-3)!.
std::vector<std::vector<std::vector<Chord>>> full_flags(int n);

// All chains of strictly nested faces (any length >= 1; the bottom may be
// the empty face).
std::vector<std::vector<std::vector<Chord>>> all_subflags(int n);

// Display form: bracketing of the edge labels with the polygon's last edge
// as root, one bracket per chord.
std::string to_bracketing(const std::vector<Chord>& face,
                          const CircularOrdering& labeling);

}  // namespace csn
