#include "symp/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace symp {

Mat graph_matrix(const Mat &v, const Mat &w, const Lagrangian &M,
                 const Ctx &ctx) {
  int n = int(v.cols());
  Mat vw(2 * n, 2 * n);
  vw << v, w;
  Mat ab = inv_checked(vw, "graph: frame not transverse", ctx) * M.span;
  Mat A = ab.topRows(n), B = ab.bottomRows(n);
  return B * inv_checked(A, "graph: subspace not transverse to target", ctx);
}

Mat dual_basis(const Mat &v, const Lagrangian &L, const Ctx &ctx) {
  Mat o = omega_mat(v, L.span);
  return L.span * inv_checked(o, "dual basis: not transverse", ctx);
}

Mat cross_ratio(const Quadruple &q, const Mat &basis_L1, const Ctx &ctx) {
  if (!transverse(q.L1, q.L2, ctx))
    throw PreconditionError("cross_ratio: L1, L2 not transverse");
  if (!transverse(q.M1, q.L2, ctx))
    throw PreconditionError("cross_ratio: M1, L2 not transverse");
  if (!transverse(q.M2, q.L1, ctx))
    throw PreconditionError("cross_ratio: M2, L1 not transverse");
  const Mat &v = basis_L1;
  Mat w = q.L2.span;
  Mat x1 = graph_matrix(v, w, q.M1, ctx); // M1 = span(v + w x1)
  Mat x2 = graph_matrix(w, v, q.M2, ctx); // M2 = span(w + v x2)
  return -x2 * x1;
}

bool is_positive_quadruple(const Quadruple &q, const Ctx &ctx) {
  try {
    Mat b1 = maslov_form(q.L1.span, q.M1, q.L2, ctx);
    Mat b2 = maslov_form(q.L2.span, q.M2, q.L1, ctx);
    return is_pos_def(b1, ctx.tol) && is_pos_def(b2, ctx.tol);
  } catch (const PreconditionError &) {
    return false;
  }
}

PositiveCert standard_basis_positive(const Quadruple &q, const Ctx &ctx) {
  if (!is_positive_quadruple(q, ctx))
    throw PreconditionError("standard basis: quadruple is not positive");
  int n = q.L1.n();
  Mat v = q.L1.span;
  Mat w = dual_basis(v, q.L2, ctx);
  Mat s1 = symmetrize(graph_matrix(v, w, q.M1, ctx));
  Mat p = sym_invsqrt(s1, ctx);
  Mat e1 = v * p, f1 = w * sym_sqrt(s1, ctx);
  Mat lam = symmetrize(-graph_matrix(e1, f1, q.M2, ctx));
  Eigen::SelfAdjointEigenSolver<Mat> es(lam);
  Mat o = es.eigenvectors();
  PositiveCert c;
  c.basis.resize(2 * n, 2 * n);
  c.basis << e1 * o, f1 * o;
  c.Lambda = es.eigenvalues().asDiagonal();
  return c;
}

Quadruple kappa(const Quadruple &q) { return {q.L2, q.M2, q.L1, q.M1}; }

Quadruple standard_quadruple(const Mat &basis, const Mat &Lambda,
                             const Ctx &ctx) {
  int n = int(basis.cols()) / 2;
  Mat e = basis.leftCols(n), f = basis.rightCols(n);
  return {make_lag(e, ctx), make_lag(e + f, ctx), make_lag(f, ctx),
          make_lag(e - f * Lambda, ctx)};
}

static bool simple_spectrum(const Mat &d, double tol) {
  for (int i = 0; i + 1 < d.rows(); ++i)
    if (std::abs(d(i + 1, i + 1) - d(i, i)) <= tol * std::max(1.0, std::abs(d(i, i))))
      return false;
  return true;
}

Mat sign_canonical(const Mat &A) {
  int r = int(A.rows()), c = int(A.cols());
  double thr = 1e-6 * std::max(1.0, A.cwiseAbs().maxCoeff());
  std::vector<int> rs(r, 0), cs(c, 0);
  // bipartite BFS on the nonzero pattern, tree entries made positive
  for (int start = 0; start < r; ++start) {
    if (rs[start])
      continue;
    rs[start] = 1;
    std::deque<std::pair<int, int>> dq{{0, start}};
    while (!dq.empty()) {
      auto [side, k] = dq.front();
      dq.pop_front();
      if (side == 0) {
        for (int j = 0; j < c; ++j)
          if (!cs[j] && std::abs(A(k, j)) > thr) {
            cs[j] = (A(k, j) * rs[k] > 0) ? 1 : -1;
            dq.push_back({1, j});
          }
      } else {
        for (int i = 0; i < r; ++i)
          if (!rs[i] && std::abs(A(i, k)) > thr) {
            rs[i] = (A(i, k) * cs[k] > 0) ? 1 : -1;
            dq.push_back({0, i});
          }
      }
    }
  }
  for (int j = 0; j < c; ++j)
    if (!cs[j])
      cs[j] = 1;
  Mat out = A;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      out(i, j) *= rs[i] * cs[j];
  return out;
}

AngleInvariant angle_invariant(const Lagrangian &La, const Lagrangian &Mc,
                               const Lagrangian &Lb, const Lagrangian &Lc,
                               const Lagrangian &Mb, const Ctx &ctx) {
  Quadruple qb{La, Lb, Lc, Mb}, qc{Lb, Lc, La, Mc};
  if (!is_positive_quadruple(qb, ctx) || !is_positive_quadruple(qc, ctx))
    throw PreconditionError("angle invariant: quintuple is not positive");
  auto cb = standard_basis_positive(qb, ctx);
  auto cc = standard_basis_positive(qc, ctx);
  Mat eb = cb.e(), fc = cc.f();
  AngleInvariant out;
  out.A = eb.colPivHouseholderQr().solve(fc);
  out.Lambda_b = cb.Lambda;
  out.Lambda_c = cc.Lambda;
  double stol = 1e-6;
  out.canonical = simple_spectrum(cb.Lambda, stol) && simple_spectrum(cc.Lambda, stol);
  if (out.canonical)
    out.canon = sign_canonical(out.A);
  return out;
}

Mat lambda_length(const Mat &v, const Mat &w) { return omega_mat(v, w); }

std::pair<Mat, Mat> decompose_in_frame(const Mat &v1, const Mat &v2,
                                       const Mat &v3, const Ctx &ctx) {
  Mat l31 = lambda_length(v3, v1), l13 = lambda_length(v1, v3);
  Mat A = inv_checked(l31, "decompose: v1, v3 not transverse", ctx) *
          lambda_length(v3, v2);
  Mat B = inv_checked(l13, "decompose: v1, v3 not transverse", ctx) *
          lambda_length(v1, v2);
  return {A, B};
}

static double scaled(const Mat &res, double scale) {
  return res.norm() / std::max(1.0, scale);
}

double check_triangle_relation(const Mat &v1, const Mat &v2, const Mat &v3,
                               const Ctx &ctx) {
  Mat l12 = lambda_length(v1, v2), l13 = lambda_length(v1, v3);
  Mat l23 = lambda_length(v2, v3), l31 = lambda_length(v3, v1);
  Mat l32 = lambda_length(v3, v2), l21 = lambda_length(v2, v1);
  // symmetry of l23 l13^-1 l12, rewritten with l_ji = -T(l_ij)
  Mat t1 = l23 * inv_checked(l13, "triangle relation", ctx) * l12;
  Mat t2 = l21 * inv_checked(l31, "triangle relation", ctx) * l32;
  return scaled(t1 + t2, t1.norm() + t2.norm());
}

double check_ptolemy(const Mat &v1, const Mat &v2, const Mat &v3,
                     const Mat &v4, const Ctx &ctx) {
  Mat l24 = lambda_length(v2, v4);
  Mat t1 = lambda_length(v2, v3) *
           inv_checked(lambda_length(v1, v3), "ptolemy", ctx) *
           lambda_length(v1, v4);
  Mat t2 = lambda_length(v2, v1) *
           inv_checked(lambda_length(v3, v1), "ptolemy", ctx) *
           lambda_length(v3, v4);
  return scaled(l24 - t1 - t2, l24.norm() + t1.norm() + t2.norm());
}

int maslov_via_lambda(const Mat &v1, const Mat &v2, const Mat &v3,
                      const Ctx &ctx) {
  Mat p = lambda_length(v1, v2) *
          inv_checked(lambda_length(v3, v2), "maslov: not transverse", ctx) *
          lambda_length(v3, v1);
  Mat s = symmetrize(p);
  return signature(s, ctx.tol * std::max(1.0, s.norm()));
}

Mat cross_ratio_via_lambda(const Mat &v1, const Mat &v2, const Mat &v3,
                           const Mat &v4, const Ctx &ctx) {
  return -inv_checked(lambda_length(v4, v1), "cross ratio: L4, L1", ctx) *
         lambda_length(v4, v3) *
         inv_checked(lambda_length(v2, v3), "cross ratio: L2, L3", ctx) *
         lambda_length(v2, v1);
}

Mat cba_block(const Mat &X) {
  return blocks(X, -X, X, Mat::Zero(X.rows(), X.cols()));
}

CBATriple triple_from_CBA(const Mat &A, const Mat &B, const Mat &C,
                          const Mat &base, const Ctx &ctx) {
  int n = int(A.rows());
  Mat I = Mat::Identity(n, n);
  for (const Mat *x : {&A, &B, &C})
    if ((x->transpose() * *x - I).norm() > std::sqrt(ctx.tol))
      throw PreconditionError("triple_from_CBA: matrix not orthogonal");
  // the chain closes iff blk(A) blk(B) blk(C) = Id, i.e. ABC = -Id
  if ((A * B * C + I).norm() > std::sqrt(ctx.tol))
    throw PreconditionError("triple_from_CBA: ABC != -Id");
  if (!is_symplectic(base, ctx))
    throw PreconditionError("triple_from_CBA: base not symplectic");
  CBATriple t;
  t.basis_c = base;
  t.basis_b = t.basis_c * cba_block(A);
  t.basis_a = t.basis_b * cba_block(B);
  t.La = make_lag(t.basis_c.leftCols(n), ctx);
  t.Lb = make_lag(t.basis_a.leftCols(n), ctx);
  t.Lc = make_lag(t.basis_b.leftCols(n), ctx);
  if (!transverse(t.La, t.Lb, ctx) || !transverse(t.Lb, t.Lc, ctx) ||
      !transverse(t.Lc, t.La, ctx))
    throw NumericalError("triple_from_CBA: output not pairwise transverse");
  return t;
}

std::tuple<Mat, Mat, Mat> CBA_from_triple(const CBATriple &t,
                                          const Ctx &ctx) {
  int n = int(t.basis_a.cols()) / 2;
  auto rd = [&](const Mat &from, const Mat &to) {
    Mat g = inv_checked(from, "CBA: basis", ctx) * to;
    return Mat(g.bottomLeftCorner(n, n));
  };
  return {rd(t.basis_c, t.basis_b), rd(t.basis_b, t.basis_a),
          rd(t.basis_a, t.basis_c)};
}

} // namespace symp
