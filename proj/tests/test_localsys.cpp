#include "doctest.h"
#include "symp/localsys.hpp"
#include "symp/xcoords.hpp"

#include <algorithm>
#include <cmath>

using namespace symp;

static std::vector<Mat> rand_frame_gauge(const Quiver &q, int n, Rng &rng) {
  std::vector<Mat> psi;
  for (int v = 0; v < q.n_vertices(); ++v) {
    Mat P = rand_gl(rng, n, 8.0);
    psi.push_back(diag2(P.inverse(), P.transpose()));
  }
  return psi;
}

static std::vector<double> sorted_eigs(const Mat &m) {
  Eigen::EigenSolver<Mat> es(m);
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i)
    out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

TEST_CASE("validator flags broken systems") {
  Rng rng(1);
  for (auto name : {"torus", "pants", "polygon:5", "annulus:2"}) {
    auto q = build_quiver(build_surface(name));
    auto sys = hol_xplus(q, rand_xplus_delta(q, 2, rng));
    CHECK(validate(sys).max() < 1e-9);
    auto bad = sys;
    bad.G[0](0, 0) += 1e-3;
    CHECK(validate(bad).max() > 1e-5);
    bad = sys;
    bad.G[q.T.slots()] *= 1.01;
    CHECK(validate(bad).max() > 1e-5);
    bad = sys;
    bad.G.pop_back();
    CHECK_THROWS_AS(validate(bad), PreconditionError);
  }
}

TEST_CASE("Maslov indices of faces and Toledo number") {
  Rng rng(2);
  for (int n = 1; n <= 3; ++n) {
    auto q = build_quiver(build_surface("torus"));
    auto sys = hol_xplus(q, rand_xplus_delta(q, n, rng));
    for (int f = 0; f < q.T.faces(); ++f)
      CHECK(mu_T(sys, f) == n);
    CHECK(toledo(sys) == doctest::Approx(-n));
    CHECK(is_maximal(sys));
    auto qp = build_quiver(build_surface("pants"));
    auto sp = hol_xplus(qp, rand_xplus_delta(qp, n, rng));
    CHECK(toledo(sp) == doctest::Approx(-n));
  }
  auto qd = build_quiver(build_surface("polygon:4"));
  auto sd = hol_xplus(qd, rand_xplus_delta(qd, 2, rng));
  CHECK_THROWS_AS(toledo(sd), PreconditionError);
  // mixed signatures
  auto q = build_quiver(build_surface("torus"));
  XEOptions opt;
  opt.face_sig = {1, -3};
  auto sys = hol_xE(q, rand_xe(q, 3, rng, opt));
  CHECK(mu_T(sys, 0) == 1);
  CHECK(mu_T(sys, 1) == -3);
  CHECK(toledo(sys) == doctest::Approx(1.0));
  CHECK_FALSE(is_maximal(sys));
}

TEST_CASE("vertex cross ratio of positive data") {
  Rng rng(3);
  auto q = build_quiver(build_surface("torus"));
  XPlus x = rand_xplus_delta(q, 2, rng);
  int a = default_E(q)[0];
  x.x[a] = Vec::Map(std::vector<double>{1.0, 2.0}.data(), 2).asDiagonal();
  x.x[q.partner_arrow(a)] = x.x[a];
  auto sys = hol_xplus(q, x);
  int v = q.arrows[a].to;
  auto cr = vertex_cross_ratio(sys, v);
  auto ev = sorted_eigs(cr);
  CHECK(ev[0] == doctest::Approx(0.5));
  CHECK(ev[1] == doctest::Approx(1.0));
  auto [X, Z] = vertex_pair(sys, v);
  CHECK(rel_err(cr, Z.inverse() * X) < 1e-9);
  CHECK_THROWS_AS(vertex_cross_ratio(hol_xplus(build_quiver(build_surface("polygon:3")),
                                               rand_xplus_delta(build_quiver(build_surface("polygon:3")), 1, rng)),
                                     0),
                  PreconditionError);
}

TEST_CASE("gauge invariance") {
  Rng rng(4);
  for (auto name : {"torus", "pants", "annulus:2", "genus2"}) {
    auto q = build_quiver(build_surface(name));
    auto sys = hol_xE(q, rand_xe(q, 2, rng));
    auto psi = rand_frame_gauge(q, 2, rng);
    auto g = gauge(sys, psi);
    CHECK(validate(g).max() < 1e-7);
    CHECK(gauge_residual(sys, psi, g) < 1e-12);
    for (int f = 0; f < q.T.faces(); ++f)
      CHECK(mu_T(g, f) == mu_T(sys, f));
    for (int v = 0; v < q.n_vertices(); ++v) {
      if (q.external(v))
        continue;
      auto e1 = sorted_eigs(vertex_cross_ratio(sys, v));
      auto e2 = sorted_eigs(vertex_cross_ratio(g, v));
      for (size_t i = 0; i < e1.size(); ++i)
        CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("boundary holonomy preserves the framing Lagrangian") {
  Rng rng(5);
  for (auto name : {"pants", "annulus:1", "torus"}) {
    auto q = build_quiver(build_surface(name));
    auto sys = hol_xE(q, rand_xe(q, 2, rng));
    for (int lab : compact_labels(q.T)) {
      Mat H = boundary_holonomy(sys, lab);
      CHECK(is_symplectic(H, Ctx{1e-6}));
      // span of the last n coordinates is invariant
      CHECK(H.topRightCorner(2, 2).norm() < 1e-8 * std::max(1.0, H.norm()));
    }
  }
}

TEST_CASE("flip transport") {
  Rng rng(6);
  for (auto name : {"torus", "pants", "polygon:6", "genus2", "annulus:3"}) {
    auto q = build_quiver(build_surface(name));
    for (int trial = 0; trial < 10; ++trial) {
      bool maxi = trial % 2 == 0;
      auto sys = maxi ? hol_xplus(q, rand_xplus_delta(q, 2, rng)) : hol_xE(q, rand_xe(q, 2, rng));
      int slot;
      do
        slot = int(rng() % q.T.slots());
      while (q.T.external(slot) || q.T.partner[slot] / 3 == slot / 3);
      FramedSystem f;
      try {
        f = flip_system(sys, slot);
      } catch (const PreconditionError &) {
        // the new diagonal is not transverse for this instance
        CHECK_FALSE(maxi);
        continue;
      }
      CHECK(validate(f).max() < 1e-6);
      CHECK(isomorphic(f.q.T, flip(q.T, slot)));
      if (maxi)
        CHECK(is_maximal(f));
      if (q.T.surf.r() == 0) {
        try {
          CHECK(toledo(f) == doctest::Approx(toledo(sys)));
        } catch (const PreconditionError &) {
        }
      }
      // flipping back recovers a gauge-equivalent system: same face indices
      auto back = flip_system(f, flip_slot_map(q.T, slot)[slot]);
      CHECK(isomorphic(back.q.T, q.T));
      for (int face = 0; face < q.T.faces(); ++face)
        if (maxi)
          CHECK(mu_T(back, face) == 2);
    }
  }
}

TEST_CASE("maximality versus face indices and cross ratios") {
  Rng rng(7);
  auto q = build_quiver(build_surface("torus"));
  int agree = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    int n = 1 + i % 3;
    XEOptions opt;
    if (i % 3 == 0)
      opt.face_sig = {n, n};
    auto sys = hol_xE(q, rand_xe(q, n, rng, opt));
    bool faces = true;
    for (int f = 0; f < q.T.faces(); ++f)
      faces = faces && mu_T(sys, f) == n;
    bool pos = true;
    for (int v = 0; v < q.n_vertices(); ++v) {
      Eigen::EigenSolver<Mat> es(vertex_cross_ratio(sys, v));
      for (int k = 0; k < n; ++k)
        pos = pos && std::abs(es.eigenvalues()(k).imag()) < 1e-9 &&
              es.eigenvalues()(k).real() > 0;
    }
    ++total;
    agree += is_maximal(sys) == (faces && pos);
  }
  CHECK(agree == total);
}

TEST_CASE("flips keep the Toledo number on badly conditioned faces") {
  // flipped faces can have M close to singular in one corner while the
  // face itself is transverse
  Rng rng(8);
  auto q = build_quiver(build_surface("genus2"));
  int flips = 0;
  for (int it = 0; it < 300; ++it) {
    auto sys = hol_xE(q, rand_xe(q, 3, rng));
    int slot;
    do
      slot = int(rng() % q.T.slots());
    while (q.T.partner[slot] / 3 == slot / 3);
    FramedSystem f;
    try {
      f = flip_system(sys, slot);
    } catch (const PreconditionError &) {
      continue;
    }
    ++flips;
    CHECK(toledo(f) == toledo(sys));
  }
  CHECK(flips > 250);
}
