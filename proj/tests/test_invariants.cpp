#include "doctest.h"
#include "symp/invariants.hpp"

#include <cmath>

using namespace symp;

static Mat vec2(double x, double y) {
  Mat m(2, 1);
  m << x, y;
  return m;
}

// decorated Lagrangian: random Lagrangian with a random GL(n) basis
static Mat rand_dec(Rng &rng, int n, const Mat &g) {
  return g * rand_lag(rng, n).span * rand_gl(rng, n, 10);
}

static Mat std_basis(int n) { return Mat::Identity(2 * n, 2 * n); }

TEST_CASE("cross ratio of standard positive quadruple") {
  Rng rng(1);
  for (int n = 1; n <= 4; ++n) {
    Vec d = Vec::LinSpaced(n, 0.5, 3.0);
    Mat lam = d.asDiagonal();
    Mat g = rand_sp(rng, n);
    Mat basis = g * std_basis(n);
    auto q = standard_quadruple(basis, lam);
    Mat cr = cross_ratio(q, basis.leftCols(n));
    CHECK((cr - Mat(lam.inverse())).norm() < 1e-9);
    CHECK(is_positive_quadruple(q));
    Quadruple bad = q;
    bad.M2 = bad.M1;
    CHECK_FALSE(is_positive_quadruple(bad));
  }
}

TEST_CASE("scalar cross ratio") {
  // lines through (1:0),(1:1),(0:1),(1:-1), compared with the scalar formula
  auto L = [](double x, double y) { return make_lag(vec2(x, y)); };
  Quadruple q{L(1, 0), L(1, 1), L(0, 1), L(1, -1)};
  Mat cr = cross_ratio(q, vec2(1, 0));
  // for lines of slope s (y = s x): M1 slope s1, M2 slope s2:
  // M1 map e -> s1 f, M2 map f -> (1/s2) e, cross ratio = -(1/s2)·s1
  double s1 = 1, s2 = -1;
  CHECK(cr(0, 0) == doctest::Approx(-(1 / s2) * s1));
  Mat crl = cross_ratio_via_lambda(vec2(1, 0), vec2(1, 1), vec2(0, 1),
                                   vec2(1, -1));
  CHECK(crl(0, 0) == doctest::Approx(cr(0, 0)));
}

TEST_CASE("cross ratio properties") {
  Rng rng(2);
  for (int it = 0; it < 100; ++it) {
    int n = 1 + it % 4;
    Mat g = rand_sp(rng, n);
    Quadruple q{apply(g, rand_lag(rng, n)), apply(g, rand_lag(rng, n)),
                apply(g, rand_lag(rng, n)), apply(g, rand_lag(rng, n))};
    Mat v = q.L1.span;
    Mat cr = cross_ratio(q, v);
    Quadruple qs{q.L1, q.M2, q.L2, q.M1};
    CHECK((cross_ratio(qs, v) * cr - Mat::Identity(n, n)).norm() < 1e-7);
    // change of basis of L1 conjugates
    Mat h = rand_gl(rng, n, 10);
    Mat cr2 = cross_ratio(q, v * h);
    CHECK((cr2 - h.inverse() * cr * h).norm() < 1e-7 * (1 + cr.norm()));
    // via Λ-lengths with arbitrary decorations
    Mat v2 = q.M1.span * rand_gl(rng, n, 10), v3 = q.L2.span * rand_gl(rng, n, 10);
    Mat v4 = q.M2.span * rand_gl(rng, n, 10);
    Mat crl = cross_ratio_via_lambda(v, v2, v3, v4);
    CHECK((crl - cr).norm() < 1e-7 * (1 + cr.norm()));
    // cyclic property: [M1,L2,M2,L1] has the inverse spectrum
    Quadruple qc{q.M1, q.L2, q.M2, q.L1};
    Mat c2 = cross_ratio(qc, q.M1.span);
    Eigen::ComplexEigenSolver<Mat> e1(cr), e2(c2.inverse());
    auto s1 = e1.eigenvalues(), s2 = e2.eigenvalues();
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(std::abs(s1(i)) + 1e3 * s1(i).real());
      b.push_back(std::abs(s2(i)) + 1e3 * s2(i).real());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (int i = 0; i < n; ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-6));
  }
}

TEST_CASE("standard basis of positive quadruples") {
  Rng rng(3);
  for (int it = 0; it < 60; ++it) {
    int n = 1 + it % 4;
    Vec d(n);
    for (int i = 0; i < n; ++i)
      d(i) = 0.3 + 2.0 * std::uniform_real_distribution<double>()(rng);
    std::sort(d.data(), d.data() + n);
    Mat lam = d.asDiagonal();
    Mat g = rand_sp(rng, n);
    auto q = standard_quadruple(g, lam);
    auto c = standard_basis_positive(q);
    CHECK((c.Lambda - lam).norm() < 1e-8);
    CHECK(is_symplectic(c.basis, Ctx{1e-8}));
    auto q2 = standard_quadruple(c.basis, c.Lambda);
    CHECK(same_lag(q2.L1, q.L1));
    CHECK(same_lag(q2.M1, q.M1));
    CHECK(same_lag(q2.L2, q.L2));
    CHECK(same_lag(q2.M2, q.M2));
    // transported by a symplectic map
    Mat g2 = rand_sp(rng, n);
    Quadruple qt{apply(g2, q.L1), apply(g2, q.M1), apply(g2, q.L2),
                 apply(g2, q.M2)};
    CHECK((standard_basis_positive(qt).Lambda - lam).norm() < 1e-7);
    // the two certificates differ by h in O(n) commuting with Λ
    Mat h = g.leftCols(n).colPivHouseholderQr().solve(c.e());
    CHECK((h.transpose() * h - Mat::Identity(n, n)).norm() < 1e-7);
    CHECK((h * lam - lam * h).norm() < 1e-7);
    // κ swap
    auto k = kappa(q);
    auto ck = standard_basis_positive(k);
    CHECK((ck.Lambda - lam).norm() < 1e-7);
    Mat u = lam.cwiseSqrt();
    Mat kb(2 * n, 2 * n);
    kb << c.f() * u, -c.e() * u.inverse();
    auto qk = standard_quadruple(kb, lam);
    CHECK(same_lag(qk.L1, k.L1));
    CHECK(same_lag(qk.M1, k.M1));
    CHECK(same_lag(qk.L2, k.L2));
    CHECK(same_lag(qk.M2, k.M2));
    // positive quadruples have positive cross-ratio spectrum
    Eigen::ComplexEigenSolver<Mat> es(cross_ratio(qt, qt.L1.span));
    for (int i = 0; i < n; ++i)
      CHECK(es.eigenvalues()(i).real() > 0);
  }
}

TEST_CASE("lambda lengths") {
  Rng rng(4);
  for (int n = 1; n <= 4; ++n) {
    Mat b = std_basis(n);
    CHECK((lambda_length(b.leftCols(n), b.rightCols(n)) - Mat::Identity(n, n))
              .norm() == 0);
    Mat g = rand_sp(rng, n);
    Mat v = rand_dec(rng, n, g), w = rand_dec(rng, n, g);
    CHECK((lambda_length(w, v) + lambda_length(v, w).transpose()).norm() < 1e-12);
    Mat p = rand_gl(rng, n), h = rand_gl(rng, n);
    CHECK((lambda_length(v * p, w * h) - p.transpose() * lambda_length(v, w) * h)
              .norm() < 1e-9 * (1 + lambda_length(v, w).norm() * p.norm() * h.norm()));
  }
}

TEST_CASE("decompose in frame") {
  Rng rng(5);
  for (int it = 0; it < 50; ++it) {
    int n = 1 + it % 4;
    Mat g = rand_sp(rng, n);
    Mat v1 = rand_dec(rng, n, g), v3 = rand_dec(rng, n, g);
    auto [a, b] = decompose_in_frame(v1, v1, v3);
    CHECK((a - Mat::Identity(n, n)).norm() < 1e-8);
    CHECK(b.norm() < 1e-8);
    std::tie(a, b) = decompose_in_frame(v1, v1 + v3, v3);
    CHECK((a - Mat::Identity(n, n)).norm() < 1e-8);
    CHECK((b - Mat::Identity(n, n)).norm() < 1e-8);
    Mat v2 = rand_dec(rng, n, g);
    std::tie(a, b) = decompose_in_frame(v1, v2, v3);
    CHECK((v1 * a + v3 * b - v2).norm() < 1e-8 * v2.norm());
  }
}

TEST_CASE("ptolemy and triangle relations") {
  CHECK(check_ptolemy(vec2(1, 0), vec2(1, 1), vec2(0, 1), vec2(-1, 1)) == 0);
  Rng rng(6);
  for (int it = 0; it < 400; ++it) {
    int n = 1 + it % 4;
    Mat g = rand_sp(rng, n);
    Mat v1 = rand_dec(rng, n, g), v2 = rand_dec(rng, n, g),
        v3 = rand_dec(rng, n, g), v4 = rand_dec(rng, n, g);
    CHECK(check_ptolemy(v1, v2, v3, v4) < 1e-8);
    CHECK(check_ptolemy(v1, v2, v3, v2) < 1e-8);
    CHECK(check_triangle_relation(v1, v2, v3) < 1e-8);
    CHECK(check_triangle_relation(v1, v1 * rand_gl(rng, n), v3) < 1e-8);
    CHECK(maslov_via_lambda(v1, v2, v3) ==
          maslov_index(make_lag(v1), make_lag(v2), make_lag(v3)));
  }
  Mat a = vec2(1, 0), b = vec2(0.6, 1.7), c = vec2(-0.4, 2.2);
  CHECK(check_triangle_relation(a, b, c) < 1e-15);
}

TEST_CASE("maslov via lambda on maximal triples") {
  for (int n = 1; n <= 4; ++n) {
    Mat b = std_basis(n);
    Mat e = b.leftCols(n), f = b.rightCols(n);
    CHECK(maslov_via_lambda(e, e + f, f) == n);
    CHECK(maslov_via_lambda(f, e + f, e) == -n);
  }
}

TEST_CASE("CBA triples") {
  Rng rng(7);
  for (int n = 1; n <= 4; ++n) {
    Mat I = Mat::Identity(n, n);
    auto t = triple_from_CBA(I, I, -I, std_basis(n));
    // (span e, span f, span(e+f)): maximal, negative orientation
    CHECK(maslov_index(t.La, t.Lb, t.Lc) == -n);
    CHECK(same_lag(t.La, L0(n)));
    CHECK(same_lag(t.Lb, L0perp(n)));
    for (int it = 0; it < 10; ++it) {
      Mat A = rand_orth(rng, n), B = rand_orth(rng, n);
      Mat C = -(A * B).inverse();
      Mat base = rand_sp(rng, n);
      auto tr = triple_from_CBA(A, B, C, base);
      auto [a2, b2, c2] = CBA_from_triple(tr);
      CHECK((a2 - A).norm() < 1e-8);
      CHECK((b2 - B).norm() < 1e-8);
      CHECK((c2 - C).norm() < 1e-8);
      CHECK(same_lag(tr.La, make_lag(tr.basis_b.rightCols(n))));
      CHECK(same_lag(tr.Lb, make_lag(tr.basis_c.rightCols(n))));
      CHECK(same_lag(tr.Lc, make_lag(tr.basis_a.rightCols(n))));
      CHECK(std::abs(maslov_index(tr.La, tr.Lb, tr.Lc)) == n);
    }
  }
  Mat one = Mat::Identity(1, 1);
  auto t1 = triple_from_CBA(one, one, -one, std_basis(1));
  CHECK(maslov_index(t1.La, t1.Lb, t1.Lc) == -1);
  CHECK_THROWS_AS(triple_from_CBA(one, one, one, std_basis(1)),
                  PreconditionError);
  // noncommuting: C = -(BA)^-1 does not close the chain
  Rng r2(70);
  Mat A = rand_orth(r2, 3), B = rand_orth(r2, 3);
  CHECK_THROWS_AS(triple_from_CBA(A, B, Mat(-(B * A).inverse()), std_basis(3)),
                  PreconditionError);
}

TEST_CASE("angle invariant of a quintuple from CBA data") {
  Rng rng(8);
  // n = 1: ±1
  for (int it = 0; it < 20; ++it) {
    int n = 1 + it % 3;
    // quintuple built from two standard positions sharing La
    Vec d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
      d1(i) = 0.5 + i + 0.3 * std::uniform_real_distribution<double>()(rng);
      d2(i) = 0.7 + 1.3 * i + 0.3 * std::uniform_real_distribution<double>()(rng);
    }
    Mat lb = d1.asDiagonal(), lc = d2.asDiagonal();
    Mat A0 = rand_orth(rng, n);
    Mat g = rand_sp(rng, n);
    // basis b: La = span e_b, Lb = span(e_b+f_b), Lc = span f_b, Mb
    Mat eb = g.leftCols(n), fb = g.rightCols(n);
    // basis c with f_c = e_b A0, and L_b = span e_c, L_c = span(e_c+f_c)
    // find e_c in span(e_b + f_b) with ω(e_c, f_c) = Id
    // e_c = (e_b + f_b)·X, ω((e_b+f_b)X, e_b A0) = -ᵀX A0 = Id
    Mat X = -A0.transpose().inverse();
    Mat ec = (eb + fb) * X, fc = eb * A0;
    Lagrangian La = make_lag(eb), Lb = make_lag(eb + fb), Lc = make_lag(fb);
    // need L_c = span(e_c + f_c)
    CHECK(same_lag(Lc, make_lag(ec + fc)));
    Lagrangian Mb = make_lag(eb - fb * lb), Mc = make_lag(ec - fc * lc);
    auto ai = angle_invariant(La, Mc, Lb, Lc, Mb);
    CHECK((ai.A.transpose() * ai.A - Mat::Identity(n, n)).norm() < 1e-7);
    CHECK(ai.canonical);
    CHECK((ai.canon - sign_canonical(A0)).norm() < 1e-7);
    // invariance under a symplectic transport
    Mat h = rand_sp(rng, n);
    auto ai2 = angle_invariant(apply(h, La), apply(h, Mc), apply(h, Lb),
                               apply(h, Lc), apply(h, Mb));
    CHECK((ai2.canon - ai.canon).norm() < 1e-6);
    if (n == 1)
      CHECK(std::abs(std::abs(ai.A(0, 0)) - 1) < 1e-9);
  }
}
