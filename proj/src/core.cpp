#include "symp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace symp {

Mat J(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return j;
}

double omega(const Vec &x, const Vec &y) {
  int n = int(x.size()) / 2;
  return x.head(n).dot(y.tail(n)) - x.tail(n).dot(y.head(n));
}

Mat omega_mat(const Mat &a, const Mat &b) {
  int n = int(a.rows()) / 2;
  return a.topRows(n).transpose() * b.bottomRows(n) -
         a.bottomRows(n).transpose() * b.topRows(n);
}

bool is_symplectic(const Mat &g, const Ctx &ctx) {
  if (g.rows() != g.cols() || g.rows() % 2)
    throw PreconditionError("is_symplectic: size mismatch");
  int n = int(g.rows()) / 2;
  Mat r = g.transpose() * J(n) * g - J(n);
  return r.norm() <= ctx.tol * std::max(1.0, g.squaredNorm());
}

Lagrangian make_lag(const Mat &cols, const Ctx &ctx) {
  if (cols.rows() != 2 * cols.cols())
    throw PreconditionError("lagrangian: expected 2n×n span");
  Eigen::JacobiSVD<Mat> svd(cols);
  auto s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= ctx.tol * s(0))
    throw PreconditionError("lagrangian: rank deficient span");
  Eigen::HouseholderQR<Mat> qr(cols);
  Lagrangian l;
  l.span = qr.householderQ() * Mat::Identity(cols.rows(), cols.cols());
  if (omega_mat(l.span, l.span).norm() > std::sqrt(ctx.tol))
    throw PreconditionError("lagrangian: span is not isotropic");
  return l;
}

Lagrangian L0(int n) {
  Mat s = Mat::Zero(2 * n, n);
  s.topRows(n).setIdentity();
  return {s};
}

Lagrangian L0perp(int n) {
  Mat s = Mat::Zero(2 * n, n);
  s.bottomRows(n).setIdentity();
  return {s};
}

static double smallest_sv(const Mat &m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

bool transverse(const Lagrangian &a, const Lagrangian &b, const Ctx &ctx) {
  Mat m(a.span.rows(), 2 * a.n());
  m << a.span, b.span;
  return smallest_sv(m) > ctx.tol;
}

bool same_lag(const Lagrangian &a, const Lagrangian &b, const Ctx &ctx) {
  // principal angles: b projected off a
  Mat r = b.span - a.span * (a.span.transpose() * b.span);
  return r.norm() < std::sqrt(ctx.tol);
}

Lagrangian apply(const Mat &g, const Lagrangian &l, const Ctx &ctx) {
  return make_lag(g * l.span, ctx);
}

Mat maslov_form(const Mat &v, const Lagrangian &M, const Lagrangian &L2,
                const Ctx &ctx) {
  int n = int(v.cols());
  Lagrangian L1 = make_lag(v, ctx);
  if (!transverse(L1, L2, ctx))
    throw PreconditionError("maslov_form: L1 and L2 not transverse");
  if (!transverse(M, L2, ctx))
    throw PreconditionError("maslov_form: M and L2 not transverse");
  Mat vw(2 * n, 2 * n);
  vw << v, L2.span;
  Mat ab = vw.partialPivLu().solve(M.span);
  Mat A = ab.topRows(n), B = ab.bottomRows(n);
  // M = span(v + w·B A⁻¹)
  Mat phi = L2.span * (B * A.inverse());
  return symmetrize(omega_mat(v, phi));
}

int maslov_index(const Lagrangian &a, const Lagrangian &b, const Lagrangian &c,
                 const Ctx &ctx) {
  int n = a.n();
  Mat k = Mat::Zero(3 * n, 3 * n);
  k.block(0, n, n, n) = omega_mat(a.span, b.span);
  k.block(n, 2 * n, n, n) = omega_mat(b.span, c.span);
  k.block(2 * n, 0, n, n) = omega_mat(c.span, a.span);
  Mat q = symmetrize(k);
  return signature(q, ctx.tol * std::max(1.0, q.norm()));
}

std::vector<double> lag_angles(const Lagrangian &M, const Ctx &ctx) {
  int n = M.n();
  CMat w(n, n);
  w.real() = M.span.topRows(n);
  w.imag() = M.span.bottomRows(n);
  CMat wwt = w * w.transpose();
  Eigen::ComplexEigenSolver<CMat> es(wwt);
  std::vector<double> phi;
  for (int i = 0; i < n; ++i) {
    double a = std::arg(es.eigenvalues()(i));
    if (a < 0)
      a += 2 * M_PI;
    double p = a / 2;
    if (p < std::sqrt(ctx.tol) || M_PI - p < std::sqrt(ctx.tol))
      p = 0;
    phi.push_back(p);
  }
  std::sort(phi.begin(), phi.end());
  return phi;
}

LiftedLagrangian lift(const Lagrangian &M, int k, const Ctx &ctx) {
  auto phi = lag_angles(M, ctx);
  double s = std::accumulate(phi.begin(), phi.end(), 0.0);
  return {M, s + k * M_PI};
}

LiftedLagrangian shift_theta(const LiftedLagrangian &l, int k) {
  return {l.lag, l.theta + k * M_PI};
}

static CMat as_complex(const Mat &span) {
  int n = int(span.cols());
  CMat w(span.rows() / 2, n);
  w.real() = span.topRows(span.rows() / 2);
  w.imag() = span.bottomRows(span.rows() / 2);
  return w;
}

static int souriau_transverse(const LiftedLagrangian &a,
                              const LiftedLagrangian &b, const Ctx &ctx) {
  int n = a.lag.n();
  CMat w1 = as_complex(a.lag.span);
  // re-unitarize (columns are orthonormal and span is Lagrangian)
  cplx d = w1.determinant();
  cplx target = std::polar(1.0, a.theta);
  if (std::abs(d / target - 1.0) > 1.0)
    w1.col(0) *= -1.0;
  CMat z2 = w1.adjoint() * as_complex(b.lag.span);
  Mat mspan(2 * n, n);
  mspan.topRows(n) = z2.real();
  mspan.bottomRows(n) = z2.imag();
  Lagrangian M = make_lag(mspan, ctx);
  auto phi = lag_angles(M, ctx);
  double s = std::accumulate(phi.begin(), phi.end(), 0.0);
  double theta = b.theta - a.theta;
  double m = n + 2.0 * (theta - s) / M_PI;
  double r = std::round(m);
  if (std::abs(m - r) > 0.01)
    throw NumericalError("souriau_index: failed integrality check");
  return int(r);
}

Lagrangian aux_lagrangian(int n, int j) {
  // rotations of L0 by incommensurable angles, mixed by a fixed orthogonal
  Mat q = Mat::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    double c = std::cos(0.7 + 0.3 * i), s = std::sin(0.7 + 0.3 * i);
    Mat g = Mat::Identity(n, n);
    g(i, i) = c;
    g(i + 1, i + 1) = c;
    g(i, i + 1) = -s;
    g(i + 1, i) = s;
    q = q * g;
  }
  Vec ang(n);
  for (int i = 0; i < n; ++i)
    ang(i) = std::fmod(0.41 + 0.6180339887 * (j + 1) + 0.3819660113 * i * (j + 2),
                       M_PI);
  Mat x = q * ang.array().cos().matrix().asDiagonal() * q.transpose();
  Mat y = q * ang.array().sin().matrix().asDiagonal() * q.transpose();
  Mat s(2 * n, n);
  s << x, y;
  return {s};
}

int souriau_index_via(const LiftedLagrangian &a, const LiftedLagrangian &b,
                      const LiftedLagrangian &aux, const Ctx &ctx) {
  if (!transverse(aux.lag, a.lag, ctx) || !transverse(aux.lag, b.lag, ctx))
    throw PreconditionError("souriau_index: auxiliary lift not transverse");
  return maslov_index(a.lag, b.lag, aux.lag, ctx) -
         souriau_transverse(b, aux, ctx) - souriau_transverse(aux, a, ctx);
}

int souriau_index(const LiftedLagrangian &a, const LiftedLagrangian &b,
                  const Ctx &ctx) {
  if (transverse(a.lag, b.lag, ctx))
    return souriau_transverse(a, b, ctx);
  int n = a.lag.n();
  Ctx strict = ctx;
  strict.tol = std::max(ctx.tol, 1e-4);
  for (int j = 0; j < 64; ++j) {
    Lagrangian l3 = aux_lagrangian(n, j);
    if (transverse(l3, a.lag, strict) && transverse(l3, b.lag, strict))
      return souriau_index_via(a, b, lift(l3, 0, ctx), ctx);
  }
  throw NumericalError("souriau_index: no auxiliary lift found");
}

int signature(const Mat &s, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(s));
  int p = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double e = es.eigenvalues()(i);
    if (e > tol)
      ++p;
    else if (e < -tol)
      --p;
  }
  return p;
}

Mat symmetrize(const Mat &a) { return 0.5 * (a + a.transpose()); }

bool is_pos_def(const Mat &s, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(s));
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() > tol * scale;
}

static Eigen::SelfAdjointEigenSolver<Mat> spd_eig(const Mat &s,
                                                  const Ctx &ctx) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(s));
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() <= ctx.tol * scale)
    throw PreconditionError("matrix is not positive definite");
  return es;
}

Mat sym_sqrt(const Mat &s, const Ctx &ctx) {
  auto es = spd_eig(s, ctx);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat sym_invsqrt(const Mat &s, const Ctx &ctx) {
  auto es = spd_eig(s, ctx);
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat sym_log(const Mat &s, const Ctx &ctx) {
  auto es = spd_eig(s, ctx);
  return es.eigenvectors() *
         es.eigenvalues().array().log().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat sym_exp(const Mat &s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(s));
  return es.eigenvectors() *
         es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat blocks(const Mat &a, const Mat &b, const Mat &c, const Mat &d) {
  Mat m(a.rows() + c.rows(), a.cols() + b.cols());
  m << a, b, c, d;
  return m;
}

Mat diag2(const Mat &a, const Mat &b) {
  Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

double rel_err(const Mat &a, const Mat &b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

Mat inv_checked(const Mat &a, const char *what, const Ctx &ctx) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw PreconditionError(std::string(what) + ": not square");
  Eigen::JacobiSVD<Mat> svd(a);
  auto s = svd.singularValues();
  if (!(s(s.size() - 1) > ctx.tol * std::max(1.0, s(0))))
    throw PreconditionError(std::string(what) + ": singular matrix");
  return a.inverse();
}

Mat rand_mat(Rng &rng, int r, int c) {
  std::normal_distribution<double> nd;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      m(i, j) = nd(rng);
  return m;
}

Mat rand_gl(Rng &rng, int n, double cond_cap) {
  for (;;) {
    Mat m = rand_mat(rng, n, n);
    Eigen::JacobiSVD<Mat> svd(m);
    auto s = svd.singularValues();
    if (s(n - 1) > 0 && s(0) / s(n - 1) < cond_cap)
      return m;
  }
}

Mat rand_sym(Rng &rng, int n) { return symmetrize(rand_mat(rng, n, n)); }

Mat rand_spd(Rng &rng, int n) {
  Mat a = rand_mat(rng, n, n);
  return a * a.transpose() / n + 0.2 * Mat::Identity(n, n);
}

Mat rand_orth(Rng &rng, int n) {
  Eigen::HouseholderQR<Mat> qr(rand_mat(rng, n, n));
  Mat q = qr.householderQ();
  return q;
}

Mat rand_so(Rng &rng, int n) {
  Mat q = rand_orth(rng, n);
  if (q.determinant() < 0)
    q.col(0) *= -1;
  return q;
}

Mat rand_sp(Rng &rng, int n) {
  Mat a = rand_gl(rng, n, 10);
  Mat s1 = 0.5 * rand_sym(rng, n), s2 = 0.5 * rand_sym(rng, n);
  Mat I = Mat::Identity(n, n), Z = Mat::Zero(n, n);
  Mat u = blocks(I, s1, Z, I), l = blocks(I, Z, s2, I);
  Mat d = diag2(a, a.transpose().inverse());
  return u * d * l;
}

Lagrangian rand_lag(Rng &rng, int n) {
  Mat q = rand_orth(rng, n);
  Vec ang(n);
  std::uniform_real_distribution<double> ud(0.05, M_PI - 0.05);
  for (int i = 0; i < n; ++i)
    ang(i) = ud(rng);
  Mat x = q * ang.array().cos().matrix().asDiagonal();
  Mat y = q * ang.array().sin().matrix().asDiagonal();
  Mat s(2 * n, n);
  s << x, y;
  return {s};
}

} // namespace symp
