#include "csn/polygon.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>

#include "csn/errors.hpp"

namespace csn {

PolygonRep PolygonRep::make(const CircularOrdering& ordering,
                            SplitSystem diagonals) {
  if (diagonals.n() != 0 && diagonals.n() != ordering.n())
    fail(ErrKind::ambient_mismatch,
         "diagonals and ordering over different taxa sets");
  for (const Split& s : diagonals.splits()) {
    if (s.is_trivial())
      fail(ErrKind::malformed_input,
           "trivial split {" + s.key() + "} cannot be a diagonal");
    if (!is_circular(s, ordering))
      fail(ErrKind::not_representable,
           "split {" + s.key() + "} is not circular for the ordering");
  }
  SplitSystem diag = diagonals.size() == 0
                         ? SplitSystem::make(ordering.n(), {})
                         : std::move(diagonals);
  return PolygonRep(ordering, std::move(diag), false, {});
}

PolygonRep PolygonRep::make(const CircularOrdering& ordering,
                            const WeightedSplitSystem& weighted) {
  std::vector<Split> diag;
  std::vector<Rat> ws;
  for (const auto& [s, w] : weighted.entries()) {
    if (s.is_trivial()) continue;  // trivial splits have no diagonal
    diag.push_back(s);
    ws.push_back(w);
  }
  PolygonRep p = make(ordering, SplitSystem::make(ordering.n(), std::move(diag)));
  p.weighted_ = true;
  p.weights_ = std::move(ws);  // entries() is sorted, so alignment holds
  return p;
}

WeightedSplitSystem PolygonRep::weighted_system() const {
  if (!weighted_)
    fail(ErrKind::malformed_input, "polygon carries no weights");
  std::vector<std::pair<Split, Rat>> entries;
  for (std::size_t i = 0; i < diagonals_.size(); ++i)
    entries.emplace_back(diagonals_.splits()[i], weights_[i]);
  return WeightedSplitSystem::make(ordering_.n(), std::move(entries));
}

bool diagonals_cross(const Split& a, const Split& b) {
  return !pairwise_compatible(a, b);
}

std::pair<int, int> block_arc(const Split& s, const CircularOrdering& ord) {
  if (!is_circular(s, ord))
    fail(ErrKind::not_representable,
         "split {" + s.key() + "} is not circular for the ordering");
  int n = ord.n();
  Mask block = s.block();
  auto inb = [&](int pos) {
    return ((block >> (ord.at(((pos % n) + n) % n) - 1)) & 1) != 0;
  };
  for (int i = 0; i < n; ++i)
    if (inb(i) && !inb(i - 1)) return {i, s.block_size()};
  fail(ErrKind::internal, "contiguous arc not found");
}

namespace {

std::vector<int> reversed_arc(const std::vector<int>& seq, int start, int len) {
  int n = static_cast<int>(seq.size());
  std::vector<int> out = seq;
  for (int i = 0; i < len; ++i)
    out[(start + i) % n] = seq[(start + len - 1 - i) % n];
  return out;
}

}  // namespace

PolygonRep twist(const PolygonRep& p, const Split& axis, std::optional<Mask> side) {
  if (axis.n() != p.ordering().n())
    fail(ErrKind::ambient_mismatch, "axis over a different taxa set");
  if (axis.is_trivial())
    fail(ErrKind::illegal_twist, "axis {" + axis.key() + "} is trivial");
  if (!is_circular(axis, p.ordering()))
    fail(ErrKind::illegal_twist,
         "axis {" + axis.key() + "} is not a chord of the ordering");
  for (const Split& d : p.diagonals().splits())
    if (d != axis && diagonals_cross(axis, d))
      fail(ErrKind::illegal_twist, "axis {" + axis.key() +
                                       "} crosses diagonal {" + d.key() + "}");
  Mask full = full_mask(axis.n());
  Mask chosen;
  if (side.has_value()) {
    if (*side != axis.block() && *side != (~axis.block() & full))
      fail(ErrKind::illegal_twist, "side is not a side of the axis");
    chosen = *side;
  } else {
    chosen = (axis.block() & 1) ? (~axis.block() & full) : axis.block();
  }

  Split arc_split = Split::make(axis.n(), chosen);
  auto [start, len] = block_arc(arc_split, p.ordering());
  if (arc_split.block() != chosen) {
    // block_arc located the canonical block; shift to the requested side
    int n = p.ordering().n();
    start = (start + len) % n;
    len = n - len;
  }
  std::vector<int> seq = reversed_arc(p.ordering().seq(), start, len);
  PolygonRep out = p;
  out.ordering_ = CircularOrdering::make(seq);
  return out;
}

const std::vector<CircularOrdering>& enumerate_orderings(int n, int n_max) {
  constexpr int kHardCap = 10;
  if (n > n_max || n > kHardCap)
    fail(ErrKind::capacity,
         "exhaustive ordering enumeration needs n <= " +
             std::to_string(std::min(n_max, kHardCap)) + ", got " +
             std::to_string(n));
  if (n < 3) fail(ErrKind::malformed_input, "orderings need at least 3 taxa");
  static std::map<int, std::vector<CircularOrdering>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<int> tail(n - 1);
  for (int i = 0; i < n - 1; ++i) tail[i] = i + 2;
  std::vector<CircularOrdering> out;
  do {
    if (tail.front() < tail.back()) {
      std::vector<int> seq;
      seq.reserve(n);
      seq.push_back(1);
      seq.insert(seq.end(), tail.begin(), tail.end());
      out.push_back(CircularOrdering::make(seq));
    }
  } while (std::next_permutation(tail.begin(), tail.end()));
  return cache.emplace(n, std::move(out)).first->second;
}

std::vector<CircularOrdering> compatible_orderings(const SplitSystem& sys,
                                                   int n_max) {
  std::vector<CircularOrdering> out;
  for (const CircularOrdering& ord : enumerate_orderings(sys.n(), n_max))
    if (is_circular(sys, ord)) out.push_back(ord);
  return out;
}

namespace {

// Laminar item structure used by twist_sequence. The canonical blocks of a
// noncrossing diagonal set form a laminar family (taxon n lies in no block),
// so a compatible ordering is, per node, a sequence of items: maximal
// sub-blocks and free taxa. Sorting each node's item sequence by arc
// reversals only ever reverses runs of whole items, and such an arc can
// cross no diagonal.
struct Item {
  Mask taxa;
  int start;  // position in the working sequence
  int len;
};

std::vector<Item> extract_items(const std::vector<int>& seq, int off, int len,
                                const std::vector<Mask>& blocks) {
  std::vector<Item> items;
  int i = 0;
  while (i < len) {
    int taxon = seq[off + i];
    Mask bit = Mask(1) << (taxon - 1);
    Mask found = 0;
    for (Mask b : blocks)
      if (b & bit) {
        found = b;
        break;
      }
    if (found != 0) {
      int blen = std::popcount(found);
      items.push_back({found, off + i, blen});
      i += blen;
    } else {
      items.push_back({bit, off + i, 1});
      i += 1;
    }
  }
  return items;
}

std::vector<Mask> maximal_blocks(const std::vector<Mask>& all, Mask within) {
  std::vector<Mask> inside;
  for (Mask b : all)
    if (b != within && (b & ~within) == 0) inside.push_back(b);
  std::vector<Mask> out;
  for (Mask b : inside) {
    bool covered = false;
    for (Mask c : inside)
      if (c != b && (b & ~c) == 0) {
        covered = true;
        break;
      }
    if (!covered) out.push_back(b);
  }
  return out;
}

int find_arc_start(const std::vector<int>& seq, Mask taxa) {
  int n = static_cast<int>(seq.size());
  for (int i = 0; i < n; ++i) {
    bool cur = (taxa >> (seq[i] - 1)) & 1;
    bool prev = (taxa >> (seq[(i - 1 + n) % n] - 1)) & 1;
    if (cur && !prev) return i;
  }
  fail(ErrKind::internal, "arc not found");
}

}  // namespace

std::variant<TwistPath, IncompatibleOrdering> twist_sequence(
    const PolygonRep& p, const CircularOrdering& target) {
  if (target.n() != p.ordering().n())
    fail(ErrKind::ambient_mismatch, "target over a different taxa set");
  if (!is_circular(p.diagonals(), target)) return IncompatibleOrdering{};
  if (target == p.ordering()) return TwistPath{};

  int n = p.ordering().n();
  std::vector<TwistMove> moves;
  std::vector<int> w = p.ordering().seq();

  auto emit = [&](int start, int len) {
    Mask arc = 0;
    for (int i = 0; i < len; ++i) arc |= Mask(1) << (w[start + i] - 1);
    moves.push_back({Split::make(n, arc), arc});
    std::reverse(w.begin() + start, w.begin() + start + len);
  };

  if (p.diagonals().size() == 0) {
    // No diagonals: bring each target label into place left to right. A
    // counterclockwise adjacency can only appear before any prefix is
    // fixed and is absorbed by re-choosing the representative.
    const std::vector<int>& t = target.seq();
    for (int j = 0; j + 2 < n; ++j) {
      int b = t[j + 1];
      if (w[j + 1] == b) continue;
      if (j == 0 && w[n - 1] == b) {
        std::reverse(w.begin() + 1, w.end());
        continue;
      }
      int pos = static_cast<int>(std::find(w.begin(), w.end(), b) - w.begin());
      emit(j + 1, pos - j);
    }
    if (canonical_cycle(w) != target.seq())
      fail(ErrKind::internal, "twist path did not reach the target");
    return TwistPath{std::move(moves)};
  }

  std::vector<Mask> blocks;
  for (const Split& s : p.diagonals().splits()) blocks.push_back(s.block());
  std::vector<Mask> roots = maximal_blocks(blocks, full_mask(n));

  Mask anchor = roots.front();
  for (Mask b : roots)
    if (Split::make(n, b) < Split::make(n, anchor)) anchor = b;

  // Rotate both sequences so the anchor block's arc starts at position 0;
  // no other block's arc can then wrap.
  std::vector<int> t = target.seq();
  {
    int ws = find_arc_start(w, anchor);
    std::rotate(w.begin(), w.begin() + ws, w.end());
    int ts = find_arc_start(t, anchor);
    std::rotate(t.begin(), t.begin() + ts, t.end());
  }

  // Selection sort of one node's item sequence; items are matched by taxa
  // set, each placement is one reversal.
  auto sort_node = [&](int off, int len, const std::vector<Mask>& subs,
                       int first) {
    std::vector<Item> want = extract_items(t, off, len, subs);
    for (int idx = first; idx + 1 < static_cast<int>(want.size()); ++idx) {
      std::vector<Item> have = extract_items(w, off, len, subs);
      if (have[idx].taxa == want[idx].taxa) continue;
      int at = -1;
      for (int k = idx + 1; k < static_cast<int>(have.size()); ++k)
        if (have[k].taxa == want[idx].taxa) {
          at = k;
          break;
        }
      if (at < 0) fail(ErrKind::internal, "item lost during twist planning");
      int start = have[idx].start;
      int span = have[at].start + have[at].len - start;
      emit(start, span);
    }
  };

  sort_node(0, n, roots, 1);
  std::vector<Mask> queue = roots;
  while (!queue.empty()) {
    Mask b = queue.front();
    queue.erase(queue.begin());
    std::vector<Mask> subs = maximal_blocks(blocks, b);
    int off = find_arc_start(w, b);
    sort_node(off, std::popcount(b), subs, 0);
    for (Mask c : subs) queue.push_back(c);
  }

  if (canonical_cycle(w) != target.seq())
    fail(ErrKind::internal, "twist path did not reach the target");
  return TwistPath{std::move(moves)};
}

}  // namespace csn
