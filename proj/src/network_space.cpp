#include "csn/network_space.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <unordered_set>

#include "csn/errors.hpp"

namespace csn {

std::int64_t delta(int n) {
  if (n < 3) fail(ErrKind::malformed_input, "delta needs n >= 3");
  if (n > 62) fail(ErrKind::capacity, "delta overflows past n = 62");
  return (std::int64_t(1) << (n - 1)) - n - 1;
}

const std::vector<Split>& all_nontrivial_splits(int n) {
  if (n < 4) fail(ErrKind::malformed_input, "nontrivial splits need n >= 4");
  if (n > 22) fail(ErrKind::capacity, "split table too large past n = 22");
  static std::map<int, std::vector<Split>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Split> out;
  // Canonical blocks are exactly the subsets of {1..n-1} of size 2..n-2.
  for (Mask m = 1; m < (Mask(1) << (n - 1)); ++m) {
    int k = std::popcount(m);
    if (k >= 2 && k <= n - 2) out.push_back(Split::make(n, m));
  }
  std::sort(out.begin(), out.end());
  return cache.emplace(n, std::move(out)).first->second;
}

std::int64_t split_index(const Split& s) {
  if (s.is_trivial())
    fail(ErrKind::malformed_input, "trivial split {" + s.key() + "} has no index");
  const std::vector<Split>& table = all_nontrivial_splits(s.n());
  auto it = std::lower_bound(table.begin(), table.end(), s);
  if (it == table.end() || *it != s)
    fail(ErrKind::internal, "split missing from index table");
  return it - table.begin();
}

Split split_at(int n, std::int64_t index) {
  const std::vector<Split>& table = all_nontrivial_splits(n);
  if (index < 0 || index >= static_cast<std::int64_t>(table.size()))
    fail(ErrKind::malformed_input,
         "split index " + std::to_string(index) + " out of range");
  return table[index];
}

NetworkPoint NetworkPoint::make(const WeightedSplitSystem& sys, int n_max) {
  for (const auto& [s, w] : sys.entries())
    if (s.is_trivial())
      fail(ErrKind::not_representable,
           "trivial split {" + s.key() + "} is not a network-space coordinate");
  if (compatible_orderings(sys.support(), n_max).empty())
    fail(ErrKind::not_representable, "support is not jointly circular");
  return NetworkPoint(sys);
}

NetworkPoint NetworkPoint::from_polygon(const PolygonRep& p) {
  return NetworkPoint(p.weighted_system());
}

NetworkPoint to_network_point(const PolygonRep& p) {
  return NetworkPoint::from_polygon(p);
}

bool in_tree_subspace(const NetworkPoint& x) {
  return x.coords().support().pairwise_compatible_all();
}

const std::vector<CircularOrdering>& chambers(int n, int n_max) {
  return enumerate_orderings(n, n_max);
}

SplitSystem chamber_support(const CircularOrdering& ord) {
  int n = ord.n();
  std::vector<Split> out;
  for (int start = 0; start < n; ++start)
    for (int len = 2; len <= n - 2; ++len) {
      Mask arc = 0;
      for (int i = 0; i < len; ++i)
        arc |= Mask(1) << (ord.at((start + i) % n) - 1);
      out.push_back(Split::make(n, arc));
    }
  return SplitSystem::make(n, std::move(out));
}

namespace {

// Chamber supports as bitmasks over split indices; valid for n <= 7
// (delta(7) = 56 <= 64).
std::vector<std::uint64_t> chamber_masks(int n, int n_max) {
  if (n > 7) fail(ErrKind::capacity, "chamber masks need n <= 7");
  std::vector<std::uint64_t> out;
  for (const CircularOrdering& ord : chambers(n, n_max)) {
    std::uint64_t m = 0;
    SplitSystem sup = chamber_support(ord);
    for (const Split& s : sup.splits())
      m |= std::uint64_t(1) << split_index(s);
    out.push_back(m);
  }
  return out;
}

}  // namespace

std::vector<SplitSystem> link_cells(int n, int k, int n_max) {
  if (n < 4 || n > 7)
    fail(ErrKind::capacity, "cell enumeration supports 4 <= n <= 7");
  int d = n * (n - 3) / 2 - 1;
  if (k < 0 || k > d)
    fail(ErrKind::malformed_input, "dimension " + std::to_string(k) +
                                       " outside 0.." + std::to_string(d));
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> cells;
  int m = n * (n - 3) / 2;
  for (const CircularOrdering& ord : chambers(n, n_max)) {
    std::vector<std::int64_t> idx;
    SplitSystem sup = chamber_support(ord);
    for (const Split& s : sup.splits())
      idx.push_back(split_index(s));
    // All (k+1)-subsets of the chamber's support.
    std::vector<int> comb(k + 1);
    for (int i = 0; i <= k; ++i) comb[i] = i;
    while (true) {
      std::uint64_t mask = 0;
      for (int i = 0; i <= k; ++i) mask |= std::uint64_t(1) << idx[comb[i]];
      if (seen.insert(mask).second) cells.push_back(mask);
      int i = k;
      while (i >= 0 && comb[i] == m - (k + 1) + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j <= k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  std::sort(cells.begin(), cells.end(), [](std::uint64_t a, std::uint64_t b) {
    // Order by ascending split-index sequences.
    while (a && b) {
      int la = std::countr_zero(a), lb = std::countr_zero(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return a == 0 && b != 0;
  });
  std::vector<SplitSystem> out;
  out.reserve(cells.size());
  for (std::uint64_t mask : cells) {
    std::vector<Split> splits;
    for (std::uint64_t m2 = mask; m2; m2 &= m2 - 1)
      splits.push_back(split_at(n, std::countr_zero(m2)));
    out.push_back(SplitSystem::make(n, std::move(splits)));
  }
  return out;
}

std::vector<CircularOrdering> chambers_containing(const SplitSystem& cell,
                                                  int n_max) {
  return compatible_orderings(cell, n_max);
}

int max_shared_face_dim(int n, int n_max) {
  std::vector<std::uint64_t> masks = chamber_masks(n, n_max);
  int best = -1;
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j)
      best = std::max(best, std::popcount(masks[i] & masks[j]) - 1);
  return best;
}

std::optional<std::array<Split, 3>> empty_triangle_witness(int n, int n_max) {
  std::vector<std::uint64_t> masks = chamber_masks(n, n_max);
  const std::vector<Split>& table = all_nontrivial_splits(n);
  int m = static_cast<int>(table.size());
  auto joint = [&](std::uint64_t need) {
    for (std::uint64_t cm : masks)
      if ((cm & need) == need) return true;
    return false;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      std::uint64_t ij = (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
      if (!joint(ij)) continue;
      for (int k = j + 1; k < m; ++k) {
        std::uint64_t ik = (std::uint64_t(1) << i) | (std::uint64_t(1) << k);
        std::uint64_t jk = (std::uint64_t(1) << j) | (std::uint64_t(1) << k);
        if (!joint(ik) || !joint(jk)) continue;
        if (!joint(ij | (std::uint64_t(1) << k)))
          return std::array<Split, 3>{table[i], table[j], table[k]};
      }
    }
  return std::nullopt;
}

std::string classify_cell(const SplitSystem& cell, int n_max) {
  if (cell.size() == 0)
    fail(ErrKind::malformed_input, "cannot classify an empty cell");
  int n = cell.n();
  std::vector<CircularOrdering> orders = compatible_orderings(cell, n_max);
  if (orders.empty())
    fail(ErrKind::not_representable, "cell is not jointly circular");

  // Position diagram: each split as the set of positions of its block,
  // canonicalized to the lexicographically smaller side.
  Mask full = full_mask(n);
  auto canon_side = [&](Mask m) {
    Mask other = ~m & full;
    Mask d = m ^ other;
    Mask low = d & -d;
    return (m & low) ? m : other;
  };
  std::string best;
  for (const CircularOrdering& ord : orders) {
    std::vector<int> posof(n + 1);
    for (int i = 0; i < n; ++i) posof[ord.at(i)] = i;
    std::vector<Mask> base;
    for (const Split& s : cell.splits()) {
      Mask pm = 0;
      for (int t : s.block_taxa()) pm |= Mask(1) << posof[t];
      base.push_back(pm);
    }
    for (int rot = 0; rot < n; ++rot)
      for (int refl = 0; refl < 2; ++refl) {
        std::vector<Mask> img;
        for (Mask pm : base) {
          Mask out = 0;
          for (int i = 0; i < n; ++i)
            if ((pm >> i) & 1) {
              int j = refl ? (n - i) % n : i;
              out |= Mask(1) << ((j + rot) % n);
            }
          img.push_back(canon_side(out));
        }
        std::sort(img.begin(), img.end(), [n](Mask a, Mask b) {
          return Split::make(n + 1, a) < Split::make(n + 1, b);
        });
        std::string key;
        for (Mask pm : img) {
          key += block_key(pm);
          key += ';';
        }
        if (best.empty() || key < best) best = key;
      }
  }
  return best;
}

Census census(int n, int n_max) {
  if (n < 4) fail(ErrKind::malformed_input, "census needs n >= 4");
  if (n > 19) fail(ErrKind::capacity, "census formulas overflow past n = 19");
  Census c;
  c.n = n;
  c.dim = n * (n - 3) / 2 - 1;
  std::int64_t ch = 1;
  for (int i = 3; i <= n - 1; ++i) ch *= i;  // (n-1)!/2
  c.chambers = ch;
  c.vertices = delta(n);
  c.edges = c.vertices * (c.vertices - 1) / 2;
  if (n > 4) c.ridges_formula = c.chambers * (c.dim + 1);
  c.enumerated = n <= 7;
  if (!c.enumerated) return c;

  std::vector<std::uint64_t> masks = chamber_masks(n, n_max);
  std::unordered_set<std::uint64_t> cells;
  int m = n * (n - 3) / 2;
  for (std::uint64_t cm : masks) {
    std::vector<int> idx;
    for (std::uint64_t t = cm; t; t &= t - 1) idx.push_back(std::countr_zero(t));
    for (std::uint64_t sub = 1; sub < (std::uint64_t(1) << m); ++sub) {
      std::uint64_t mask = 0;
      for (std::uint64_t t = sub; t; t &= t - 1)
        mask |= std::uint64_t(1) << idx[std::countr_zero(t)];
      cells.insert(mask);
    }
  }
  c.cells_by_dim.assign(c.dim + 1, 0);
  for (std::uint64_t mask : cells) ++c.cells_by_dim[std::popcount(mask) - 1];
  c.ridges_enumerated = c.dim >= 1 ? c.cells_by_dim[c.dim - 1] : 0;

  const std::vector<Split>& table = all_nontrivial_splits(n);
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      if (pairwise_compatible(table[i], table[j]))
        ++c.compatible_pairs;
      else
        ++c.crossing_pairs;
    }
  return c;
}

}  // namespace csn
