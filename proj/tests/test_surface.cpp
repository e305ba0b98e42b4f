#include "doctest.h"
#include "support.hpp"
#include "symp/core.hpp"
#include "symp/surface.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace symp;

static void check_counts(const Triangulation &T) {
  int e = T.surf.e(), r = T.surf.r();
  CHECK(T.faces() == 2 * e + r);
  CHECK(T.n_edges() == 3 * e + 2 * r);
  CHECK(T.n_external() == r);
  auto q = build_quiver(T);
  CHECK(q.n_vertices() == 6 * e + 3 * r);
  CHECK(q.n_a2() == 2 * (3 * e + r));
  CHECK(int(q.arrows.size()) - q.n_a2() == 3 * T.faces());
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    auto &x = q.arrows[a];
    // framing compatibility: b at the source meets t at the target
    CHECK(T.b(x.from) == T.t(x.to));
    if (x.kind == ArrowKind::A3)
      CHECK(x.from / 3 == x.to / 3);
    else
      CHECK(q.partner_arrow(int(a)) != int(a));
  }
}

static std::vector<Triangulation> presets() {
  return {build_surface(Preset::Polygon, 3), build_surface(Preset::Polygon, 4),
          build_surface(Preset::Polygon, 7), build_surface(Preset::OncePuncturedTorus),
          build_surface(Preset::PairOfPants), build_surface(Preset::Annulus, 1),
          build_surface(Preset::Annulus, 3), build_surface(Preset::Genus2)};
}

TEST_CASE("preset counts") {
  for (auto &T : presets())
    check_counts(T);
  auto sq = build_surface("polygon:4");
  CHECK(sq.faces() == 2);
  CHECK(sq.n_edges() == 5);
  CHECK(sq.n_external() == 4);
  auto to = build_surface("torus");
  CHECK(to.faces() == 2);
  CHECK(to.n_edges() == 3);
  CHECK(to.n_external() == 0);
  auto q = build_quiver(to);
  CHECK(q.n_vertices() == 6);
  CHECK(q.n_a2() == 6);
  CHECK(build_surface("pants").faces() == 2);
  CHECK(build_quiver(build_surface("pants")).n_vertices() == 6);
  CHECK(build_surface("genus2").faces() == 6);
  auto d = derive_surface(build_surface("genus2"));
  CHECK(d.surf.g == 2);
  CHECK(d.V == 1);
  CHECK_THROWS_AS(build_surface(Preset::Polygon, 2), PreconditionError);
  CHECK_THROWS_AS(build_surface("klein"), PreconditionError);
}

TEST_CASE("validator rejects broken data") {
  auto T = build_surface("polygon:5");
  auto bad = T;
  bad.partner[0] = 4; // not an involution
  CHECK_THROWS_AS(validate(bad), PreconditionError);
  bad = T;
  bad.surf.marks = {6};
  CHECK_THROWS_AS(validate(bad), PreconditionError);
  bad = T;
  bad.corner[0][0] = 3;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
  bad = build_surface("torus");
  bad.surf = {0, 3, {}};
  CHECK_THROWS_AS(validate(bad), PreconditionError);
}

TEST_CASE("flip") {
  auto sq = build_surface("polygon:4");
  int d = find_side(sq, 0, 2) >= 0 ? find_side(sq, 0, 2) : find_side(sq, 2, 0);
  REQUIRE(d >= 0);
  auto f = flip(sq, d);
  CHECK(has_arc(f, 1, 3));
  CHECK_FALSE(has_arc(f, 0, 2));
  // double flip on the new diagonal
  auto back = flip(f, 3 * (d / 3) + 2);
  CHECK(isomorphic(back, sq));
  CHECK_FALSE(isomorphic(f, sq));
  CHECK_THROWS_AS(flip(sq, 0), PreconditionError); // external side
  auto ann = build_surface(Preset::Annulus, 1);
  CHECK_THROWS_AS(flip(ann, 1), PreconditionError); // self-glued face

  for (auto T : presets()) {
    Rng rng(3);
    for (int it = 0; it < 20; ++it) {
      std::vector<int> ok;
      for (int v = 0; v < T.slots(); ++v)
        if (!T.external(v) && T.partner[v] / 3 != v / 3)
          ok.push_back(v);
      if (ok.empty())
        break;
      int v = ok[rng() % ok.size()];
      auto U = flip(T, v);
      check_counts(U);
      CHECK(isomorphic(flip(U, 3 * (v / 3) + 2), T));
      T = U;
    }
  }
}

TEST_CASE("flips on disjoint quadrilaterals commute") {
  auto h = build_surface("polygon:6");
  int a = find_side(h, 2, 0), b = find_side(h, 4, 0);
  REQUIRE(a >= 0);
  REQUIRE(b >= 0);
  auto ab = flip(flip(h, a), b);
  auto ba = flip(flip(h, b), a);
  CHECK(isomorphic(ab, ba));
  CHECK(has_arc(ab, 1, 3));
  CHECK(has_arc(ab, 3, 5));
}

TEST_CASE("spanning data") {
  for (auto &T : presets()) {
    auto q = build_quiver(T);
    int e = T.surf.e(), r = T.surf.r();
    int seed = q.n_a2() ? T.slots() : 0;
    auto sd = spanning_data(q, seed);
    CHECK(int(sd.S.size()) == 3 * e + 2 * r - 1);
    CHECK(int(sd.R.size()) == e + 1);
    CHECK(int(sd.E.size()) == 3 * e + r);
    if (q.n_a2())
      CHECK(std::count(sd.E.begin(), sd.E.end(), sd.a0) == 1);
    for (int f = 0; f < T.faces(); ++f) {
      int c = 0;
      for (int s = 0; s < 3; ++s)
        c += std::count(sd.S.begin(), sd.S.end(), 3 * f + s) +
             std::count(sd.R.begin(), sd.R.end(), 3 * f + s);
      CHECK(c == 2);
    }
    std::set<int> cyc;
    for (int a : sd.E)
      cyc.insert(std::min(a, q.partner_arrow(a)));
    CHECK(cyc.size() == sd.E.size());
    auto sd2 = spanning_data(q, seed);
    CHECK(sd2.S == sd.S);
    CHECK(sd2.R == sd.R);
    CHECK(sd2.E == sd.E);
  }
  auto tq = build_quiver(build_surface("torus"));
  auto sd = spanning_data(tq, 6);
  CHECK(sd.S.size() == 2);
  CHECK(sd.R.size() == 2);
  // the disk has e = -1, so R is empty
  CHECK(spanning_data(build_quiver(build_surface("polygon:4")), 6).R.empty());
}

TEST_CASE("compact boundary cycles") {
  for (auto &T : presets()) {
    auto q = build_quiver(T);
    auto labels = compact_labels(T);
    CHECK(int(labels.size()) == T.surf.p());
    std::set<int> visited;
    for (int c : labels) {
      auto cyc = boundary_cycle(q, c);
      CHECK(cyc.size() % 2 == 0);
      for (size_t i = 0; i < cyc.size(); ++i) {
        auto &a = q.arrows[cyc[i]];
        CHECK((a.kind == ArrowKind::A3) == (i % 2 == 0));
        CHECK(a.to == q.arrows[cyc[(i + 1) % cyc.size()]].from);
        if (i % 2 == 0) {
          CHECK(T.b(a.from) == c);
          visited.insert(a.from);
        }
      }
    }
    int want = 0;
    for (int v = 0; v < T.slots(); ++v)
      for (int c : labels)
        want += T.b(v) == c;
    CHECK(int(visited.size()) == want);
  }
}

TEST_CASE("zigzag sequences") {
  auto sq = flip(build_surface("polygon:4"), find_side(build_surface("polygon:4"), 2, 0));
  auto z = enumerate_zigzag(sq, 0, 2);
  CHECK(z.size() == 2);
  CHECK(z == zigzag_oracle(sq, 0, 2, 5));
  std::vector<std::vector<int>> want{{0, 1, 3, 2}, {0, 3, 1, 2}};
  CHECK(z == want);
  // an edge of the triangulation
  auto one = enumerate_zigzag(sq, 1, 3);
  CHECK(one.size() == 1);
  CHECK(one[0].size() == 2);
  // pentagon fan, diagonal crossing both fan diagonals
  auto pent = build_surface("polygon:5");
  CHECK(enumerate_zigzag(pent, 1, 4).size() == 3);
  CHECK(enumerate_zigzag(pent, 1, 4) == zigzag_oracle(pent, 1, 4, 7));
  CHECK_THROWS_AS(enumerate_zigzag(pent, 2, 2), PreconditionError);
  CHECK_THROWS_AS(enumerate_zigzag(build_surface("torus"), 0, 1), PreconditionError);

  // random hexagon triangulations, every diagonal in both directions
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    auto T = build_surface("polygon:6");
    for (int k = 0; k < 5; ++k) {
      std::vector<int> ok;
      for (int v = 0; v < T.slots(); ++v)
        if (!T.external(v))
          ok.push_back(v);
      T = flip(T, ok[rng() % ok.size()]);
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        if (a == b)
          continue;
        auto zz = enumerate_zigzag(T, a, b);
        CHECK(zz == zigzag_oracle(T, a, b, 7));
        for (auto &s : zz)
          CHECK(s.size() % 2 == 0); // odd number of steps
      }
  }
}
