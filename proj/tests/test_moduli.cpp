#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "csn/associahedron.hpp"
#include "csn/errors.hpp"
#include "csn/moduli.hpp"
#include "csn/network_space.hpp"
#include "csn/splits.hpp"

using namespace csn;

namespace {

const CircularOrdering& ord5() {
  static auto o = CircularOrdering::make({1, 2, 3, 4, 5});
  return o;
}

const CircularOrdering& ord6() {
  static auto o = CircularOrdering::make({1, 2, 3, 4, 5, 6});
  return o;
}

std::vector<Rat> rats(std::vector<Rat> v) { return v; }

}  // namespace

TEST_CASE("phi_vertex: pentagon triangulation") {
  auto x = phi_vertex(ord5(), {{0, 2}, {0, 3}});
  CHECK(x.coords() ==
        rats({Rat(1, 2), Rat(1, 2), Rat(), Rat(), Rat()}));
  CHECK_THROWS_AS(phi_vertex(ord5(), {{0, 2}}), Error);  // not a triangulation
}

TEST_CASE("phi_face: top faces") {
  auto top5 = phi_face(ord5(), {});
  for (const Rat& c : top5.coords()) CHECK(c == Rat(1, 5));

  auto top6 = phi_face(ord6(), {});
  Rat sum;
  for (std::size_t i = 0; i < top6.coords().size(); ++i) {
    const Chord& c = all_chords(6)[i];
    int span = c.b - c.a;
    Rat want = (span == 3) ? Rat(2, 21) : Rat(5, 42);
    CHECK(top6.coords()[i] == want);
    sum += top6.coords()[i];
  }
  CHECK(sum == Rat(1));
}

TEST_CASE("phi_face: pentagon chord face") {
  auto x = phi_face(ord5(), {{0, 2}});
  CHECK(x.coords() ==
        rats({Rat(1, 2), Rat(1, 4), Rat(), Rat(), Rat(1, 4)}));

  CHECK_THROWS_AS(phi_face(ord5(), {{0, 2}, {1, 3}}), Error);  // crossing
  CHECK_THROWS_AS(phi_face(ord5(), {{0, 2}, {0, 2}}), Error);  // duplicate
  CHECK_THROWS_AS(phi_face(ord5(), {{0, 1}}), Error);          // not a chord
}

TEST_CASE("phi_face equals the centroid of extending triangulations") {
  for (int n : {5, 6}) {
    const auto& ord = n == 5 ? ord5() : ord6();
    for (int k = 0; k <= n - 3; ++k)
      for (const auto& face : noncrossing_sets(n, k)) {
        auto ext = extending_triangulations(n, face);
        std::vector<Rat> centroid(all_chords(n).size());
        for (const auto& t : ext) {
          auto v = phi_vertex(ord, t);
          for (std::size_t i = 0; i < centroid.size(); ++i)
            centroid[i] += v.coords()[i];
        }
        Rat inv(1, static_cast<std::int64_t>(ext.size()));
        for (auto& c : centroid) c = c * inv;
        CHECK(phi_face(ord, face).coords() == centroid);
      }
  }
}

TEST_CASE("phi_point mixes face embeddings") {
  auto f = Subflag::make(ord5(), {{{0, 2}}});
  auto single = phi_point(ModuliPoint::make(f, {Rat(1)}));
  CHECK(single == phi_face(ord5(), {{0, 2}}));

  auto fv = Subflag::make(ord5(), {{{0, 2}}, {{0, 2}, {0, 3}}});
  auto mix = phi_point(ModuliPoint::make(fv, {Rat(1, 2), Rat(1, 2)}));
  CHECK(mix.coords() ==
        rats({Rat(1, 2), Rat(3, 8), Rat(), Rat(), Rat(1, 8)}));
}

TEST_CASE("embedded point validation") {
  CHECK_THROWS_AS(EmbeddedPoint::make(ord5(), rats({Rat(1)})), Error);
  CHECK_THROWS_AS(
      EmbeddedPoint::make(ord5(), rats({Rat(2), Rat(-1), Rat(), Rat(), Rat()})),
      Error);
  CHECK_THROWS_AS(
      EmbeddedPoint::make(ord5(),
                          rats({Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(), Rat()})),
      Error);
  auto ok = EmbeddedPoint::make(
      ord5(), rats({Rat(1, 2), Rat(1, 2), Rat(), Rat(), Rat()}));
  CHECK(ok.n() == 5);
}

TEST_CASE("embedded point dense coordinates") {
  auto x = phi_face(ord5(), {{0, 2}});
  auto d = x.dense();
  REQUIRE(d.size() == 10);
  CHECK(d[split_index(chord_split({0, 2}, ord5()))] == Rat(1, 2));
  CHECK(d[split_index(chord_split({0, 3}, ord5()))] == Rat(1, 4));
  CHECK(d[split_index(chord_split({2, 4}, ord5()))] == Rat(1, 4));
  Rat sum;
  for (const Rat& v : d) sum += v;
  CHECK(sum == Rat(1));
}

TEST_CASE("subflag validation") {
  CHECK_NOTHROW(Subflag::make(ord5(), {{}}));  // the top face alone
  CHECK_THROWS_AS(Subflag::make(ord5(), {}), Error);
  CHECK_THROWS_AS(Subflag::make(ord5(), {{{0, 1}}}), Error);
  CHECK_THROWS_AS(Subflag::make(ord5(), {{{0, 2}, {1, 3}}}), Error);
  CHECK_THROWS_AS(Subflag::make(ord5(), {{{0, 2}}, {{0, 3}}}), Error);  // not nested
  CHECK_THROWS_AS(Subflag::make(ord5(), {{{0, 2}}, {{0, 2}}}), Error);  // repeat
  CHECK_THROWS_AS(
      Subflag::make(ord5(), {{{0, 2}, {0, 3}, {2, 4}}}), Error);  // impossible face
}

TEST_CASE("moduli point validation") {
  auto f = Subflag::make(ord5(), {{{0, 2}}, {{0, 2}, {0, 3}}});
  CHECK_THROWS_AS(ModuliPoint::make(f, {Rat(1)}), Error);
  CHECK_THROWS_AS(ModuliPoint::make(f, {Rat(1), Rat()}), Error);
  CHECK_THROWS_AS(ModuliPoint::make(f, {Rat(1, 2), Rat(1, 4)}), Error);
  CHECK_NOTHROW(ModuliPoint::make(f, {Rat(1, 2), Rat(1, 2)}));
}

TEST_CASE("flag_simplex_dim") {
  auto full = Subflag::make(ord5(), {{}, {{0, 2}}, {{0, 2}, {0, 3}}});
  CHECK(flag_simplex_dim(full) == 2);
  CHECK(flag_simplex_dim(Subflag::make(ord5(), {{{0, 2}}})) == 0);
  CHECK(flag_simplex_dim(Subflag::make(ord5(), {{{0, 2}}, {{0, 2}, {0, 3}}})) ==
        1);
}

TEST_CASE("decode: unit cases") {
  auto v = decode(phi_vertex(ord5(), {{0, 2}, {0, 3}}));
  REQUIRE(v.ok);
  CHECK(v.point->flag().faces() ==
        std::vector<std::vector<Chord>>{{{0, 2}, {0, 3}}});
  CHECK(v.point->coefficients() == rats({Rat(1)}));

  auto t = decode(phi_face(ord5(), {}));
  REQUIRE(t.ok);
  CHECK(t.point->flag().faces() == std::vector<std::vector<Chord>>{{}});
  CHECK(t.point->coefficients() == rats({Rat(1)}));

  auto fv = Subflag::make(ord5(), {{{0, 2}}, {{0, 2}, {0, 3}}});
  auto m = ModuliPoint::make(fv, {Rat(1, 4), Rat(3, 4)});
  auto r = decode(phi_point(m));
  REQUIRE(r.ok);
  CHECK(*r.point == m);

  auto deep = Subflag::make(ord6(), {{}, {{0, 3}}, {{0, 2}, {0, 3}},
                                     {{0, 2}, {0, 3}, {3, 5}}});
  auto md = ModuliPoint::make(
      deep, {Rat(1, 7), Rat(2, 7), Rat(3, 7), Rat(1, 7)});
  auto rd = decode(phi_point(md));
  REQUIRE(rd.ok);
  CHECK(*rd.point == md);
}

TEST_CASE("decode: named failures") {
  auto fail_with = [](std::vector<Rat> coords, const char* why) {
    auto r = decode(EmbeddedPoint::make(ord5(), std::move(coords)));
    CHECK_FALSE(r.ok);
    CHECK(r.failure == why);
  };
  fail_with({Rat(1), Rat(), Rat(), Rat(), Rat()}, "coordinate exceeds 1/(n-3)");
  fail_with({Rat(1, 2), Rat(), Rat(1, 2), Rat(), Rat()},
            "top-coordinate chords cross");
  fail_with({Rat(1, 2), Rat(3, 10), Rat(1, 5), Rat(), Rat()},
            "coefficient out of range");
  fail_with({Rat(1, 2), Rat(5, 16), Rat(1, 16), Rat(), Rat(1, 8)},
            "no new top coordinates");
  fail_with({Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 8), Rat(1, 8)},
            "no new top coordinates");
}

TEST_CASE("glue_moduli: n = 4 is a triangle of segments") {
  auto atlas = glue_moduli(4, 9);
  CHECK(atlas.n == 4);
  REQUIRE(atlas.chambers.size() == 3);
  REQUIRE(atlas.classes.size() == 6);

  std::map<std::vector<int>, int> edge_members;
  int tops = 0;
  for (const auto& cls : atlas.classes) {
    CHECK(cls.members.size() == (std::size_t(1) << cls.splits.size()));
    CHECK(cls.dim == 1 - static_cast<int>(cls.splits.size()));
    if (cls.splits.size() == 0) {
      ++tops;
      CHECK(cls.members.size() == 1);
    } else {
      REQUIRE(cls.splits.size() == 1);
      edge_members[cls.members] = static_cast<int>(split_index(cls.splits.splits()[0]));
    }
  }
  CHECK(tops == 3);
  // The three vertex classes pair the chambers into a 3-cycle.
  REQUIRE(edge_members.size() == 3);
  CHECK(edge_members.count({0, 1}) == 1);
  CHECK(edge_members.count({0, 2}) == 1);
  CHECK(edge_members.count({1, 2}) == 1);
}

TEST_CASE("glue_moduli: n = 5 pentagon atlas") {
  auto atlas = glue_moduli(5, 9);
  REQUIRE(atlas.chambers.size() == 12);
  std::map<std::size_t, int> by_splits;  // |splits| -> class count
  std::map<int, int> edge_uses;          // chamber -> edge-face slots used
  for (const auto& cls : atlas.classes) {
    ++by_splits[cls.splits.size()];
    CHECK(cls.members.size() == (std::size_t(1) << cls.splits.size()));
    CHECK(std::is_sorted(cls.members.begin(), cls.members.end()));
    if (cls.splits.size() == 1) {
      CHECK(cls.members[0] != cls.members[1]);  // glued to a distinct pentagon
      for (int m : cls.members) ++edge_uses[m];
    }
  }
  CHECK(by_splits[0] == 12);
  CHECK(by_splits[1] == 30);
  CHECK(by_splits[2] == 15);
  CHECK(atlas.classes.size() == 57);
  for (const auto& [chamber, uses] : edge_uses) {
    CHECK(chamber >= 0);
    CHECK(uses == 5);  // every pentagon edge glued exactly once
  }
  CHECK(edge_uses.size() == 12);
  // Euler characteristic of the 2-complex.
  CHECK(15 - 30 + 12 == -3);
}

TEST_CASE("glue_moduli: n = 6 class histogram") {
  auto atlas = glue_moduli(6, 9);
  REQUIRE(atlas.chambers.size() == 60);
  std::map<std::size_t, int> by_size;
  for (const auto& cls : atlas.classes) {
    CHECK(cls.members.size() == (std::size_t(1) << cls.splits.size()));
    ++by_size[cls.members.size()];
  }
  CHECK(by_size[1] == 60);
  CHECK(by_size[2] == 270);
  CHECK(by_size[4] == 315);
  CHECK(by_size[8] == 105);
  CHECK(105 - 315 + 270 - 60 == 0);
}

TEST_CASE("glued faces have equal embeddings") {
  CHECK(atlas_phi_consistent(glue_moduli(4, 9)));
  CHECK(atlas_phi_consistent(glue_moduli(5, 9)));
  CHECK(atlas_phi_consistent(glue_moduli(6, 9)));
}

TEST_CASE("atlas capacity") {
  CHECK_THROWS_AS(glue_moduli(8, 9), Error);
}
