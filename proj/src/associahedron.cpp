#include "csn/associahedron.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "csn/errors.hpp"
#include "csn/polygon.hpp"

namespace csn {

std::int64_t catalan(int k) {
  if (k < 0 || k > 32)
    fail(ErrKind::capacity, "catalan(" + std::to_string(k) + ") out of range");
  static std::int64_t table[33];
  static bool init = false;
  if (!init) {
    table[0] = 1;
    for (int i = 1; i <= 32; ++i)
      table[i] = table[i - 1] * 2 * (2 * i - 1) / (i + 1);
    init = true;
  }
  return table[k];
}

const std::vector<Chord>& all_chords(int n) {
  if (n < 4) fail(ErrKind::malformed_input, "chords need n >= 4");
  static std::map<int, std::vector<Chord>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Chord> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 2; b < n; ++b)
      if (!(a == 0 && b == n - 1)) out.push_back({a, b});
  return cache.emplace(n, std::move(out)).first->second;
}

bool chords_cross(const Chord& x, const Chord& y) {
  return (x.a < y.a && y.a < x.b && x.b < y.b) ||
         (y.a < x.a && x.a < y.b && y.b < x.b);
}

Split chord_split(const Chord& c, const CircularOrdering& labeling) {
  Mask m = 0;
  for (int i = c.a; i < c.b; ++i) m |= Mask(1) << (labeling.at(i) - 1);
  return Split::make(labeling.n(), m);
}

Chord split_chord(const Split& s, const CircularOrdering& labeling) {
  auto [start, len] = block_arc(s, labeling);
  int n = labeling.n();
  int a = start, b = (start + len) % n;
  if (a < b && !(a == 0 && b == n - 1)) return {a, b};
  // The block wraps; its complement arc gives the same chord.
  a = b;
  b = start;
  return {a, b};
}

const std::vector<std::vector<Chord>>& noncrossing_sets(int n, int k) {
  if (k < 0 || k > n - 3)
    fail(ErrKind::malformed_input, "face size " + std::to_string(k) +
                                       " outside 0.." + std::to_string(n - 3));
  if (n > 12) fail(ErrKind::capacity, "face enumeration needs n <= 12");
  static std::map<std::pair<int, int>, std::vector<std::vector<Chord>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const std::vector<Chord>& chords = all_chords(n);
  std::vector<std::vector<Chord>> out;
  std::vector<Chord> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < chords.size(); ++i) {
      bool ok = true;
      for (const Chord& c : cur)
        if (chords_cross(chords[i], c)) {
          ok = false;
          break;
        }
      if (ok) {
        cur.push_back(chords[i]);
        self(self, i + 1);
        cur.pop_back();
      }
    }
  };
  rec(rec, 0);
  return cache.emplace(key, std::move(out)).first->second;
}

std::int64_t dissection_count(int n, int k) {
  if (k < 0 || k > n - 3) return 0;
  auto binom = [](std::int64_t a, std::int64_t b) {
    if (b < 0 || b > a) return std::int64_t(0);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return binom(n - 3, k) * binom(n + k - 1, k) / (k + 1);
}

std::vector<std::vector<Chord>> extending_triangulations(
    int n, const std::vector<Chord>& face) {
  std::vector<std::vector<Chord>> out;
  for (const std::vector<Chord>& t : noncrossing_sets(n, n - 3)) {
    bool contains = true;
    for (const Chord& c : face)
      if (!std::binary_search(t.begin(), t.end(), c)) {
        contains = false;
        break;
      }
    if (contains) out.push_back(t);
  }
  return out;
}

std::vector<std::vector<int>> regions(int n, const std::vector<Chord>& face) {
  std::vector<std::vector<int>> out;
  std::vector<int> whole(n);
  for (int i = 0; i < n; ++i) whole[i] = i;
  auto rec = [&](auto&& self, std::vector<int> verts,
                 std::vector<Chord> cs) -> void {
    if (cs.empty()) {
      out.push_back(std::move(verts));
      return;
    }
    Chord c = cs.back();
    cs.pop_back();
    auto ia = std::find(verts.begin(), verts.end(), c.a) - verts.begin();
    auto ib = std::find(verts.begin(), verts.end(), c.b) - verts.begin();
    if (ia > ib) std::swap(ia, ib);
    std::vector<int> v1(verts.begin() + ia, verts.begin() + ib + 1);
    std::vector<int> v2(verts.begin() + ib, verts.end());
    v2.insert(v2.end(), verts.begin(), verts.begin() + ia + 1);
    std::vector<Chord> c1, c2;
    for (const Chord& x : cs) {
      bool in1 = std::find(v1.begin(), v1.end(), x.a) != v1.end() &&
                 std::find(v1.begin(), v1.end(), x.b) != v1.end();
      if (in1)
        c1.push_back(x);
      else
        c2.push_back(x);
    }
    self(self, std::move(v1), std::move(c1));
    self(self, std::move(v2), std::move(c2));
  };
  rec(rec, std::move(whole), face);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::vector<Chord>>> full_flags(int n) {
  std::vector<std::vector<std::vector<Chord>>> out;
  for (const std::vector<Chord>& t : noncrossing_sets(n, n - 3)) {
    std::vector<int> perm(n - 3);
    for (int i = 0; i < n - 3; ++i) perm[i] = i;
    do {
      std::vector<std::vector<Chord>> chain;
      std::vector<Chord> cur;
      chain.push_back(cur);
      for (int i : perm) {
        cur.push_back(t[i]);
        std::sort(cur.begin(), cur.end());
        chain.push_back(cur);
      }
      out.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

std::vector<std::vector<std::vector<Chord>>> all_subflags(int n) {
  // Chains of strictly nested noncrossing sets. Every subset of a
  // noncrossing set is noncrossing, so chains under a fixed top face are
  // chains in its Boolean lattice.
  std::vector<std::vector<Chord>> faces;
  for (int k = 0; k <= n - 3; ++k)
    for (const std::vector<Chord>& f : noncrossing_sets(n, k))
      faces.push_back(f);
  std::vector<std::vector<std::vector<Chord>>> out;
  auto extend = [&](auto&& self, std::vector<std::vector<Chord>>& chain) -> void {
    out.push_back(chain);
    const std::vector<Chord> bottom = chain.front();
    for (const std::vector<Chord>& g : faces) {
      if (g.size() >= bottom.size()) continue;
      bool subset = true;
      for (const Chord& c : g)
        if (!std::binary_search(bottom.begin(), bottom.end(), c)) {
          subset = false;
          break;
        }
      if (!subset) continue;
      chain.insert(chain.begin(), g);
      self(self, chain);
      chain.erase(chain.begin());
    }
  };
  for (const std::vector<Chord>& f : faces) {
    std::vector<std::vector<Chord>> chain{f};
    extend(extend, chain);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_bracketing(const std::vector<Chord>& face,
                          const CircularOrdering& labeling) {
  int n = labeling.n();
  for (const Chord& c : face)
    if (c.a == 0 && c.b == n - 1)
      fail(ErrKind::malformed_input, "not a chord");
  // Letters are edges 0..n-2; the edge n-1 is the root. Chord (a,b) with
  // 0 <= a < b <= n-1 brackets letters a..b-1.
  std::string out;
  auto rec = [&](auto&& self, int lo, int hi,
                 std::vector<Chord> inner) -> void {
    out += '(';
    int i = lo;
    while (i < hi) {
      // Longest chord starting at vertex i within (lo, hi).
      int best = -1;
      for (const Chord& c : inner)
        if (c.a == i && c.b <= hi && c.b > best) best = c.b;
      if (best >= 0 && !(i == lo && best == hi)) {
        std::vector<Chord> deeper;
        for (const Chord& c : inner)
          if (c.a >= i && c.b <= best && !(c.a == i && c.b == best))
            deeper.push_back(c);
        self(self, i, best, deeper);
        i = best;
      } else {
        out += std::to_string(labeling.at(i));
        i += 1;
      }
    }
    out += ')';
  };
  std::vector<Chord> sorted_face = face;
  std::sort(sorted_face.begin(), sorted_face.end());
  rec(rec, 0, n - 1, sorted_face);
  return out;
}

}  // namespace csn
