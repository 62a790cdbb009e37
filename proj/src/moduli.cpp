#include "csn/moduli.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "csn/errors.hpp"
#include "csn/network_space.hpp"
#include "csn/polygon.hpp"

namespace csn {
namespace {

int chord_count(int n) { return n * (n - 3) / 2; }

struct RegionTest {
  Rat rho;                 // residual per unit of remaining mass
  std::vector<int> d_ids;  // skip-one chords of the region
};

struct FaceData {
  std::vector<int> chord_ids;
  std::vector<Rat> phi;  // closed-form embedding, indexed like all_chords(n)
  std::vector<RegionTest> tests;
};

// Position-level data shared by every chamber of the same size. Chord
// subsets are bitmasks over all_chords(n) order.
class PhiCache {
 public:
  static PhiCache& get(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<PhiCache>> by_n;
    std::scoped_lock lock(mu);
    auto& slot = by_n[n];
    if (!slot) slot.reset(new PhiCache(n));
    return *slot;
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(chords_.size()); }
  const std::vector<Chord>& chords() const { return chords_; }
  std::uint64_t cross_mask(int id) const { return cross_[id]; }

  int chord_id(const Chord& c) const {
    auto it = std::lower_bound(chords_.begin(), chords_.end(), c);
    if (it == chords_.end() || !(*it == c)) return -1;
    return static_cast<int>(it - chords_.begin());
  }

  const FaceData& face(std::uint64_t mask) {
    std::scoped_lock lock(mu_);
    auto it = faces_.find(mask);
    if (it == faces_.end()) it = faces_.emplace(mask, build(mask)).first;
    return it->second;
  }

 private:
  explicit PhiCache(int n) : n_(n), chords_(all_chords(n)) {
    if (n < 4) fail(ErrKind::malformed_input, "embedding needs at least 4 taxa");
    if (m() > 64) fail(ErrKind::capacity, "embedding limited to 12 taxa");
    cross_.assign(m(), 0);
    for (int i = 0; i < m(); ++i)
      for (int j = 0; j < m(); ++j)
        if (chords_cross(chords_[i], chords_[j])) cross_[i] |= std::uint64_t(1) << j;
  }

  FaceData build(std::uint64_t mask) const;

  int n_;
  std::vector<Chord> chords_;
  std::vector<std::uint64_t> cross_;
  std::mutex mu_;
  std::unordered_map<std::uint64_t, FaceData> faces_;
};

FaceData PhiCache::build(std::uint64_t mask) const {
  FaceData fd;
  std::vector<Chord> face;
  for (int i = 0; i < m(); ++i)
    if (mask >> i & 1) {
      fd.chord_ids.push_back(i);
      face.push_back(chords_[i]);
    }
  const Rat top(1, n_ - 3);
  const auto regs = regions(n_, face);

  fd.phi.assign(m(), Rat());
  for (int i = 0; i < m(); ++i) {
    if (mask >> i & 1) {
      fd.phi[i] = top;
      continue;
    }
    if (cross_[i] & mask) continue;  // crossing chords stay at zero
    // The chord lies inside a unique region; it cuts an r-gon into an
    // s-gon and a t-gon sharing its two endpoints.
    const Chord& c = chords_[i];
    for (const auto& reg : regs) {
      auto pa = std::find(reg.begin(), reg.end(), c.a);
      auto pb = std::find(reg.begin(), reg.end(), c.b);
      if (pa == reg.end() || pb == reg.end()) continue;
      const int r = static_cast<int>(reg.size());
      const int s = (static_cast<int>(pb - pa) % r + r) % r + 1;
      const int t = r - s + 2;
      fd.phi[i] = top * Rat(catalan(s - 2) * catalan(t - 2), catalan(r - 2));
      break;
    }
  }

  for (const auto& reg : regs) {
    const int r = static_cast<int>(reg.size());
    if (r < 4) continue;
    RegionTest test;
    test.rho = top * Rat(catalan(r - 3), catalan(r - 2));
    std::uint64_t seen = 0;
    for (int i = 0; i < r; ++i) {
      int x = reg[i], y = reg[(i + 2) % r];
      int id = chord_id(Chord{std::min(x, y), std::max(x, y)});
      if (id < 0) fail(ErrKind::internal, "region skip-one pair is not a chord");
      if (!(seen >> id & 1)) {
        seen |= std::uint64_t(1) << id;
        test.d_ids.push_back(id);
      }
    }
    std::sort(test.d_ids.begin(), test.d_ids.end());
    fd.tests.push_back(std::move(test));
  }
  return fd;
}

bool chord_in_range(int n, const Chord& c) {
  return 0 <= c.a && c.a < c.b && c.b <= n - 1 && c.b - c.a >= 2 &&
         !(c.a == 0 && c.b == n - 1);
}

std::uint64_t face_mask_checked(PhiCache& pc, const std::vector<Chord>& face,
                                const char* what) {
  std::uint64_t mask = 0;
  for (const Chord& c : face) {
    int id = pc.chord_id(c);
    if (id < 0) {
      std::ostringstream os;
      os << what << ": (" << c.a << "," << c.b << ") is not a chord of the "
         << pc.n() << "-gon";
      fail(ErrKind::malformed_input, os.str());
    }
    if (mask >> id & 1) {
      std::ostringstream os;
      os << what << ": duplicate chord (" << c.a << "," << c.b << ")";
      fail(ErrKind::malformed_input, os.str());
    }
    mask |= std::uint64_t(1) << id;
  }
  for (std::uint64_t rest = mask; rest;) {
    int id = std::countr_zero(rest);
    rest &= rest - 1;
    if (pc.cross_mask(id) & mask) {
      std::ostringstream os;
      os << what << ": chords cross";
      fail(ErrKind::malformed_input, os.str());
    }
  }
  return mask;
}

}  // namespace

EmbeddedPoint EmbeddedPoint::make(const CircularOrdering& chamber,
                                  std::vector<Rat> coords) {
  const int n = chamber.n();
  if (n < 4) fail(ErrKind::malformed_input, "embedding needs at least 4 taxa");
  if (static_cast<int>(coords.size()) != chord_count(n))
    fail(ErrKind::malformed_input, "embedded point needs one coordinate per chord");
  Rat sum;
  for (const Rat& x : coords) {
    if (x < Rat()) fail(ErrKind::malformed_input, "embedded coordinates must be nonnegative");
    sum += x;
  }
  if (sum != Rat(1))
    fail(ErrKind::malformed_input, "embedded coordinates must sum to 1");
  return EmbeddedPoint(chamber, std::move(coords));
}

std::vector<Rat> EmbeddedPoint::dense() const {
  const int n = chamber_.n();
  std::vector<Rat> out(static_cast<std::size_t>(delta(n)));
  const auto& chords = all_chords(n);
  for (int i = 0; i < static_cast<int>(chords.size()); ++i)
    out[static_cast<std::size_t>(split_index(chord_split(chords[i], chamber_)))] =
        coords_[i];
  return out;
}

Subflag Subflag::make(const CircularOrdering& chamber,
                      std::vector<std::vector<Chord>> faces) {
  const int n = chamber.n();
  if (faces.empty()) fail(ErrKind::malformed_input, "subflag needs at least one face");
  for (auto& f : faces) {
    std::sort(f.begin(), f.end());
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!chord_in_range(n, f[i]))
        fail(ErrKind::malformed_input, "subflag face has an invalid chord");
      if (i && f[i] == f[i - 1])
        fail(ErrKind::malformed_input, "subflag face has a duplicate chord");
      for (std::size_t j = 0; j < i; ++j)
        if (chords_cross(f[j], f[i]))
          fail(ErrKind::malformed_input, "subflag face has crossing chords");
    }
    if (static_cast<int>(f.size()) > n - 3)
      fail(ErrKind::malformed_input, "subflag face has too many chords");
  }
  for (std::size_t i = 1; i < faces.size(); ++i) {
    if (faces[i - 1].size() >= faces[i].size() ||
        !std::includes(faces[i].begin(), faces[i].end(), faces[i - 1].begin(),
                       faces[i - 1].end()))
      fail(ErrKind::malformed_input, "subflag faces must strictly increase");
  }
  return Subflag(chamber, std::move(faces));
}

ModuliPoint ModuliPoint::make(Subflag flag, std::vector<Rat> coefficients) {
  if (coefficients.size() != flag.faces().size())
    fail(ErrKind::malformed_input, "need one coefficient per subflag face");
  Rat sum;
  for (const Rat& a : coefficients) {
    if (!(a > Rat())) fail(ErrKind::malformed_input, "coefficients must be positive");
    sum += a;
  }
  if (sum != Rat(1)) fail(ErrKind::malformed_input, "coefficients must sum to 1");
  return ModuliPoint(std::move(flag), std::move(coefficients));
}

EmbeddedPoint phi_vertex(const CircularOrdering& chamber,
                         const std::vector<Chord>& triangulation) {
  const int n = chamber.n();
  if (static_cast<int>(triangulation.size()) != n - 3)
    fail(ErrKind::malformed_input, "a triangulation has exactly n-3 chords");
  return phi_face(chamber, triangulation);
}

EmbeddedPoint phi_face(const CircularOrdering& chamber,
                       const std::vector<Chord>& face) {
  PhiCache& pc = PhiCache::get(chamber.n());
  std::uint64_t mask = face_mask_checked(pc, face, "face");
  return EmbeddedPoint::make(chamber, pc.face(mask).phi);
}

EmbeddedPoint phi_point(const ModuliPoint& p) {
  const CircularOrdering& chamber = p.flag().chamber();
  PhiCache& pc = PhiCache::get(chamber.n());
  std::vector<Rat> acc(static_cast<std::size_t>(pc.m()));
  for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
    std::uint64_t mask = face_mask_checked(pc, p.flag().faces()[i], "face");
    const FaceData& fd = pc.face(mask);
    for (int d = 0; d < pc.m(); ++d)
      acc[static_cast<std::size_t>(d)] +=
          p.coefficients()[i] * fd.phi[static_cast<std::size_t>(d)];
  }
  return EmbeddedPoint::make(chamber, std::move(acc));
}

int flag_simplex_dim(const Subflag& flag) {
  PhiCache& pc = PhiCache::get(flag.chamber().n());
  const int m = pc.m();
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> base =
      pc.face(face_mask_checked(pc, flag.faces()[0], "face")).phi;
  for (std::size_t i = 1; i < flag.faces().size(); ++i) {
    const FaceData& fd =
        pc.face(face_mask_checked(pc, flag.faces()[i], "face"));
    std::vector<Rat> row(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d)
      row[static_cast<std::size_t>(d)] =
          fd.phi[static_cast<std::size_t>(d)] - base[static_cast<std::size_t>(d)];
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < m && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != Rat()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      auto& row = rows[static_cast<std::size_t>(r)];
      const auto& prow = rows[static_cast<std::size_t>(rank)];
      if (row[static_cast<std::size_t>(col)] == Rat()) continue;
      Rat f = row[static_cast<std::size_t>(col)] / prow[static_cast<std::size_t>(col)];
      for (int c = col; c < m; ++c)
        row[static_cast<std::size_t>(c)] -= f * prow[static_cast<std::size_t>(c)];
    }
    ++rank;
  }
  return rank;
}

DecodeResult decode(const EmbeddedPoint& x) {
  const CircularOrdering& chamber = x.chamber();
  const int n = chamber.n();
  PhiCache& pc = PhiCache::get(n);
  const int m = pc.m();
  const Rat top(1, n - 3);
  const auto& coords = x.coords();

  auto failure = [](const char* why) {
    return DecodeResult{false, std::nullopt, why};
  };

  std::uint64_t cur = 0;
  for (int d = 0; d < m; ++d) {
    const Rat& c = coords[static_cast<std::size_t>(d)];
    if (c > top) return failure("coordinate exceeds 1/(n-3)");
    if (c == top) cur |= std::uint64_t(1) << d;
  }
  for (int d = 0; d < m; ++d)
    if ((cur >> d & 1) && (pc.cross_mask(d) & cur))
      return failure("top-coordinate chords cross");

  std::vector<std::uint64_t> masks{cur};
  std::vector<Rat> coeffs;
  std::vector<Rat> acc(static_cast<std::size_t>(m));
  Rat used;

  while (true) {
    const FaceData& fd = pc.face(masks.back());
    const Rat rem = Rat(1) - used;
    bool all_pass = true;
    bool have_cand = false;
    Rat cand;
    for (const RegionTest& test : fd.tests) {
      const Rat want = test.rho * rem;
      bool pass = true;
      bool have_min = false;
      Rat lo;
      for (int d : test.d_ids) {
        Rat resid = coords[static_cast<std::size_t>(d)] - acc[static_cast<std::size_t>(d)];
        if (resid != want) pass = false;
        if (!have_min || resid < lo) {
          lo = resid;
          have_min = true;
        }
      }
      if (pass) continue;
      all_pass = false;
      Rat c = lo / test.rho;
      if (!have_cand || c < cand) {
        cand = c;
        have_cand = true;
      }
    }

    if (all_pass) {
      coeffs.push_back(rem);
      for (int d = 0; d < m; ++d)
        acc[static_cast<std::size_t>(d)] += rem * fd.phi[static_cast<std::size_t>(d)];
      break;
    }

    if (!(cand > Rat()) || !(cand < rem))
      return failure("coefficient out of range");
    coeffs.push_back(cand);
    for (int d = 0; d < m; ++d)
      acc[static_cast<std::size_t>(d)] += cand * fd.phi[static_cast<std::size_t>(d)];
    used += cand;

    const Rat base = top * (Rat(1) - used);
    std::uint64_t next = 0;
    for (int d = 0; d < m; ++d)
      if (coords[static_cast<std::size_t>(d)] ==
          acc[static_cast<std::size_t>(d)] + base)
        next |= std::uint64_t(1) << d;
    if ((next & masks.back()) != masks.back() || next == masks.back())
      return failure("no new top coordinates");
    for (int d = 0; d < m; ++d)
      if ((next >> d & 1) && (pc.cross_mask(d) & next))
        return failure("top-coordinate chords cross");
    masks.push_back(next);
    if (static_cast<int>(masks.size()) > n - 2)
      fail(ErrKind::internal, "decode chain exceeded maximal length");
  }

  for (int d = 0; d < m; ++d)
    if (acc[static_cast<std::size_t>(d)] != coords[static_cast<std::size_t>(d)])
      return failure("embedding mismatch");

  std::vector<std::vector<Chord>> faces;
  for (std::uint64_t mask : masks) {
    std::vector<Chord> f;
    for (int d = 0; d < m; ++d)
      if (mask >> d & 1) f.push_back(pc.chords()[static_cast<std::size_t>(d)]);
    faces.push_back(std::move(f));
  }
  return DecodeResult{
      true,
      ModuliPoint::make(Subflag::make(chamber, std::move(faces)), std::move(coeffs)),
      ""};
}

Atlas glue_moduli(int n, int n_max) {
  if (n < 4) fail(ErrKind::malformed_input, "atlas needs at least 4 taxa");
  if (n > 7) fail(ErrKind::capacity, "atlas limited to 7 taxa");
  Atlas atlas;
  atlas.n = n;
  atlas.chambers = chambers(n, n_max);
  const auto& chs = atlas.chambers;

  // Node = (chamber, face) keyed by the face's split-index mask, which a
  // twist leaves unchanged.
  std::map<std::pair<int, std::uint64_t>, int> node_id;
  std::vector<std::pair<int, std::uint64_t>> nodes;
  std::vector<int> parent;
  auto get_node = [&](int ci, std::uint64_t smask) {
    auto [it, fresh] = node_id.try_emplace({ci, smask}, static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back({ci, smask});
      parent.push_back(it->second);
    }
    return it->second;
  };
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(b)] = a;
  };

  auto chamber_index = [&](const CircularOrdering& ord) {
    auto it = std::lower_bound(chs.begin(), chs.end(), ord);
    if (it == chs.end() || !(*it == ord))
      fail(ErrKind::internal, "twisted ordering missing from chamber list");
    return static_cast<int>(it - chs.begin());
  };

  for (int ci = 0; ci < static_cast<int>(chs.size()); ++ci) {
    const CircularOrdering& ord = chs[static_cast<std::size_t>(ci)];
    for (int k = 0; k <= n - 3; ++k) {
      for (const auto& face : noncrossing_sets(n, k)) {
        std::vector<Split> splits;
        std::uint64_t smask = 0;
        for (const Chord& c : face) {
          Split s = chord_split(c, ord);
          smask |= std::uint64_t(1) << split_index(s);
          splits.push_back(s);
        }
        int node = get_node(ci, smask);
        if (splits.empty()) continue;
        PolygonRep rep = PolygonRep::make(ord, SplitSystem::make(n, splits));
        for (const Split& s : splits) {
          int cj = chamber_index(twist(rep, s).ordering());
          unite(node, get_node(cj, smask));
        }
      }
    }
  }

  std::map<int, FaceClass> classes;
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    int root = find(v);
    auto [ci, smask] = nodes[static_cast<std::size_t>(v)];
    auto it = classes.find(root);
    if (it == classes.end()) {
      std::vector<Split> splits;
      for (std::uint64_t rest = smask; rest;) {
        int idx = std::countr_zero(rest);
        rest &= rest - 1;
        splits.push_back(split_at(n, idx));
      }
      it = classes
               .emplace(root, FaceClass{SplitSystem::make(n, splits),
                                        n - 3 - std::popcount(smask),
                                        {}})
               .first;
    }
    it->second.members.push_back(ci);
  }

  for (auto& [root, cls] : classes) std::sort(cls.members.begin(), cls.members.end());
  for (auto& [root, cls] : classes) atlas.classes.push_back(std::move(cls));
  std::sort(atlas.classes.begin(), atlas.classes.end(),
            [](const FaceClass& a, const FaceClass& b) {
              if (a.splits.size() != b.splits.size())
                return a.splits.size() < b.splits.size();
              for (std::size_t i = 0; i < a.splits.size(); ++i) {
                const Split &x = a.splits.splits()[i], &y = b.splits.splits()[i];
                if (!(x == y)) return x < y;
              }
              return a.members < b.members;
            });
  return atlas;
}

bool atlas_phi_consistent(const Atlas& atlas) {
  for (const FaceClass& cls : atlas.classes) {
    bool have_ref = false;
    std::vector<Rat> ref;
    for (int ci : cls.members) {
      const CircularOrdering& ord = atlas.chambers[static_cast<std::size_t>(ci)];
      std::vector<Chord> face;
      for (const Split& s : cls.splits.splits()) face.push_back(split_chord(s, ord));
      std::sort(face.begin(), face.end());
      std::vector<Rat> dense = phi_face(ord, face).dense();
      if (!have_ref) {
        ref = std::move(dense);
        have_ref = true;
      } else if (dense != ref) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace csn
