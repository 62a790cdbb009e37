#include "csn/splits.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>

#include "csn/errors.hpp"

namespace csn {

Mask full_mask(int n) {
  return n >= 32 ? ~Mask(0) : (Mask(1) << n) - 1;
}

std::vector<int> mask_to_taxa(Mask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1) out.push_back(i + 1);
  return out;
}

Mask taxa_to_mask(const std::vector<int>& taxa, int n) {
  Mask m = 0;
  for (int t : taxa) {
    if (t < 1 || t > n)
      fail(ErrKind::malformed_input,
           "taxon " + std::to_string(t) + " outside 1.." + std::to_string(n));
    Mask bit = Mask(1) << (t - 1);
    if (m & bit)
      fail(ErrKind::malformed_input, "repeated taxon " + std::to_string(t));
    m |= bit;
  }
  return m;
}

std::string block_key(Mask m) {
  std::string out;
  for (int t : mask_to_taxa(m)) {
    if (!out.empty()) out += ',';
    out += std::to_string(t);
  }
  return out;
}

Split Split::make(int n, Mask side) {
  if (n < 3) fail(ErrKind::malformed_input, "splits need at least 3 taxa");
  if (n > kMaskTaxaLimit)
    fail(ErrKind::capacity, "taxa count " + std::to_string(n) + " unsupported");
  Mask full = full_mask(n);
  side &= full;
  if (side == 0 || side == full)
    fail(ErrKind::malformed_input, "split side must be a proper nonempty subset");
  Mask block = (side >> (n - 1)) & 1 ? (~side & full) : side;
  return Split(n, block);
}

Split Split::make(int n, const std::vector<int>& side) {
  return make(n, taxa_to_mask(side, n));
}

Mask Split::coblock() const {
  return ~block_ & full_mask(n_);
}

int Split::block_size() const {
  return std::popcount(block_);
}

bool Split::is_trivial() const {
  int k = block_size();
  return k == 1 || k == n_ - 1;
}

bool operator<(const Split& a, const Split& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  Mask x = a.block_, y = b.block_;
  Mask d = x ^ y;
  if (d == 0) return false;
  Mask low = d & -d;
  // Ascending-sequence lexicographic order: at the first differing taxon,
  // the block holding it comes first unless the other block is a strict
  // prefix (has no taxa beyond that point).
  Mask above = ~(low | (low - 1));
  if (x & low) return (y & above) != 0;
  return (x & above) == 0;
}

bool pairwise_compatible(const Split& a, const Split& b) {
  if (a.n() != b.n())
    fail(ErrKind::ambient_mismatch, "splits over different taxa sets");
  Mask full = full_mask(a.n());
  Mask A = a.block(), Ac = ~A & full;
  Mask B = b.block(), Bc = ~B & full;
  return (A & B) == 0 || (A & Bc) == 0 || (Ac & B) == 0 || (Ac & Bc) == 0;
}

std::vector<int> canonical_cycle(const std::vector<int>& seq) {
  int n = static_cast<int>(seq.size());
  int pos1 = -1;
  for (int i = 0; i < n; ++i)
    if (seq[i] == 1) pos1 = i;
  if (pos1 < 0) fail(ErrKind::internal, "cycle without taxon 1");
  std::vector<int> fwd(n), rev(n);
  for (int i = 0; i < n; ++i) fwd[i] = seq[(pos1 + i) % n];
  for (int i = 0; i < n; ++i) rev[i] = seq[(pos1 - i + n) % n];
  return fwd[1] < fwd[n - 1] ? fwd : rev;
}

CircularOrdering CircularOrdering::make(const std::vector<int>& seq) {
  int n = static_cast<int>(seq.size());
  if (n < 3) fail(ErrKind::malformed_input, "ordering needs at least 3 taxa");
  if (n > kMaskTaxaLimit)
    fail(ErrKind::capacity, "taxa count " + std::to_string(n) + " unsupported");
  std::vector<bool> seen(n + 1, false);
  for (int t : seq) {
    if (t < 1 || t > n || seen[t])
      fail(ErrKind::malformed_input, "ordering is not a permutation of 1.." +
                                         std::to_string(n));
    seen[t] = true;
  }
  return CircularOrdering(canonical_cycle(seq));
}

bool is_circular(const Split& s, const CircularOrdering& ord) {
  if (s.n() != ord.n())
    fail(ErrKind::ambient_mismatch, "split and ordering over different taxa sets");
  int n = ord.n();
  Mask block = s.block();
  int transitions = 0;
  for (int i = 0; i < n; ++i) {
    bool a = (block >> (ord.at(i) - 1)) & 1;
    bool b = (block >> (ord.at((i + 1) % n) - 1)) & 1;
    if (a != b) ++transitions;
  }
  return transitions == 2;
}

SplitSystem SplitSystem::make(int n, std::vector<Split> splits) {
  for (const Split& s : splits)
    if (s.n() != n)
      fail(ErrKind::ambient_mismatch, "split over " + std::to_string(s.n()) +
                                          " taxa in a system over " +
                                          std::to_string(n));
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
  SplitSystem sys;
  sys.n_ = n;
  sys.splits_ = std::move(splits);
  return sys;
}

bool SplitSystem::contains(const Split& s) const {
  return std::binary_search(splits_.begin(), splits_.end(), s);
}

std::optional<std::pair<Split, Split>> SplitSystem::first_incompatible_pair() const {
  for (std::size_t i = 0; i < splits_.size(); ++i)
    for (std::size_t j = i + 1; j < splits_.size(); ++j)
      if (!pairwise_compatible(splits_[i], splits_[j]))
        return std::make_pair(splits_[i], splits_[j]);
  return std::nullopt;
}

bool SplitSystem::pairwise_compatible_all() const {
  return !first_incompatible_pair().has_value();
}

bool is_circular(const SplitSystem& sys, const CircularOrdering& ord) {
  for (const Split& s : sys.splits())
    if (!is_circular(s, ord)) return false;
  return true;
}

WeightedSplitSystem WeightedSplitSystem::make(
    int n, std::vector<std::pair<Split, Rat>> entries) {
  std::vector<std::pair<Split, Rat>> kept;
  for (auto& [s, w] : entries) {
    if (s.n() != n)
      fail(ErrKind::ambient_mismatch, "split over " + std::to_string(s.n()) +
                                          " taxa in a system over " +
                                          std::to_string(n));
    if (w.is_negative())
      fail(ErrKind::malformed_input,
           "negative weight " + w.str() + " on split {" + s.key() + "}");
    if (!w.is_zero()) kept.emplace_back(s, w);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < kept.size(); ++i)
    if (kept[i].first == kept[i - 1].first)
      fail(ErrKind::malformed_input,
           "duplicate split {" + kept[i].first.key() + "}");
  WeightedSplitSystem sys;
  sys.n_ = n;
  sys.entries_ = std::move(kept);
  return sys;
}

SplitSystem WeightedSplitSystem::support() const {
  std::vector<Split> splits;
  splits.reserve(entries_.size());
  for (const auto& [s, w] : entries_) splits.push_back(s);
  return SplitSystem::make(n_, std::move(splits));
}

std::optional<Rat> WeightedSplitSystem::weight_of(const Split& s) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), s,
      [](const auto& e, const Split& key) { return e.first < key; });
  if (it != entries_.end() && it->first == s) return it->second;
  return std::nullopt;
}

Rat LeafLabeledTree::leaf_distance(int i, int j) const {
  if (i < 1 || i > n_ || j < 1 || j > n_)
    fail(ErrKind::malformed_input, "leaf index out of range");
  if (i == j) return Rat(0);
  std::vector<std::vector<std::pair<int, int>>> adj(vertex_count_ + 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adj[edges_[e].u].push_back({edges_[e].v, static_cast<int>(e)});
    adj[edges_[e].v].push_back({edges_[e].u, static_cast<int>(e)});
  }
  std::vector<int> via(vertex_count_ + 1, -1);
  std::vector<int> prev(vertex_count_ + 1, 0);
  std::queue<int> q;
  q.push(i);
  prev[i] = i;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (u == j) break;
    for (auto [v, e] : adj[u]) {
      if (prev[v] == 0) {
        prev[v] = u;
        via[v] = e;
        q.push(v);
      }
    }
  }
  if (prev[j] == 0) fail(ErrKind::internal, "tree is disconnected");
  Rat d(0);
  for (int v = j; v != i; v = prev[v]) d += edges_[via[v]].length;
  return d;
}

SplitSystem LeafLabeledTree::internal_splits() const {
  std::vector<Split> out;
  for (const TreeEdge& e : edges_)
    if (!e.split.is_trivial()) out.push_back(e.split);
  return SplitSystem::make(n_, std::move(out));
}

LeafLabeledTree buneman_tree(const WeightedSplitSystem& sys) {
  int n = sys.n();
  if (n < 3) fail(ErrKind::malformed_input, "tree needs at least 3 taxa");
  SplitSystem support = sys.support();
  if (auto bad = support.first_incompatible_pair())
    fail(ErrKind::incompatible, "splits {" + bad->first.key() + "} and {" +
                                    bad->second.key() + "} are incompatible");

  // Star: leaves 1..n around center n+1, then insert nontrivial splits one
  // at a time. For a compatible fresh split exactly one vertex sees every
  // neighbor subtree inside one side.
  struct Edge {
    int u, v;
    Rat length;
    Mask leaves_v_side;  // leaves in the component of v after removing the edge
    Split split;
  };
  int center = n + 1;
  int next_vertex = n + 2;
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i) {
    Rat w(0);
    if (auto tw = sys.weight_of(Split::make(n, Mask(1) << (i - 1)))) w = *tw;
    edges.push_back({center, i, w, Mask(1) << (i - 1), Split::make(n, Mask(1) << (i - 1))});
  }

  for (const auto& [s, w] : sys.entries()) {
    if (s.is_trivial()) continue;
    Mask A = s.block(), B = s.coblock();
    // Adjacency with per-neighbor subtree leaf masks.
    std::map<int, std::vector<std::pair<Mask, int>>> adj;  // vertex -> (subtree mask, edge idx)
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      Mask mv = edges[e].leaves_v_side;
      adj[edges[e].u].push_back({mv, e});
      adj[edges[e].v].push_back({Mask(~mv) & full_mask(n), e});
    }
    int host = -1;
    for (auto& [v, subs] : adj) {
      if (v <= n) continue;
      bool ok = true;
      for (auto& [m, e] : subs)
        if ((m & A) != 0 && (m & B) != 0) {
          ok = false;
          break;
        }
      if (ok) {
        host = v;
        break;
      }
    }
    if (host < 0)
      fail(ErrKind::internal, "no insertion point for split {" + s.key() + "}");
    int fresh = next_vertex++;
    // Move the A-side neighbors of host to the fresh vertex.
    for (auto& [m, e] : adj[host]) {
      if ((m & A) == 0) continue;
      if (edges[e].u == host)
        edges[e].u = fresh;
      else
        edges[e].v = fresh;
    }
    edges.push_back({host, fresh, w, A, s});
  }

  LeafLabeledTree tree;
  tree.n_ = n;
  tree.vertex_count_ = next_vertex - 1;
  for (const Edge& e : edges)
    tree.edges_.push_back({e.u, e.v, e.length, e.split});
  return tree;
}

}  // namespace csn
