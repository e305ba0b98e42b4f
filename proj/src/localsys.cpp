#include "symp/localsys.hpp"
#include "symp/invariants.hpp"

#include <algorithm>
#include <cmath>

namespace symp {

double SystemResiduals::max() const {
  return std::max({symplectic, two_cycle, three_cycle, shape});
}

Mat block_C(const Mat &G) {
  int n = int(G.rows()) / 2;
  return G.bottomLeftCorner(n, n);
}

Mat block_M(const Mat &G, const Ctx &ctx) {
  int n = int(G.rows()) / 2;
  return symmetrize(G.topLeftCorner(n, n) *
                    inv_checked(block_C(G), "block_M: C singular", ctx));
}

std::array<int, 3> face_cycle(const Quiver &, int f) {
  return {3 * f, 3 * f + 2, 3 * f + 1};
}

static double rel(const Mat &a, double scale) { return a.norm() / std::max(1.0, scale); }

SystemResiduals validate(const FramedSystem &sys, const Ctx &ctx) {
  SystemResiduals r;
  const auto &q = sys.q;
  int n = sys.n, N = 2 * n;
  if (sys.G.size() != q.arrows.size())
    throw PreconditionError("system: one matrix per arrow expected");
  Mat Jn = J(n), I = Mat::Identity(N, N);
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    const Mat &G = sys.G[a];
    if (G.rows() != N || G.cols() != N)
      throw PreconditionError("system: matrix of wrong size");
    double sc = G.norm();
    r.symplectic = std::max(r.symplectic, rel(G.transpose() * Jn * G - Jn, sc * sc));
    Mat C = block_C(G);
    Eigen::FullPivLU<Mat> lu(C);
    if (!lu.isInvertible()) {
      r.shape = std::max(r.shape, 1.0);
      continue;
    }
    Mat Cit = lu.inverse().transpose();
    double s = rel(G.bottomRightCorner(n, n), sc) + rel(G.topRightCorner(n, n) + Cit, sc);
    if (q.arrows[a].kind == ArrowKind::A2) {
      s += rel(G.topLeftCorner(n, n), sc);
      int b = q.partner_arrow(int(a));
      r.two_cycle = std::max(r.two_cycle, rel(G * sys.G[b] + I, sc * sys.G[b].norm()));
    } else {
      Mat M = G.topLeftCorner(n, n) * lu.inverse();
      s += rel(M - M.transpose(), sc);
    }
    r.shape = std::max(r.shape, s);
  }
  for (int f = 0; f < q.T.faces(); ++f) {
    auto c = face_cycle(q, f);
    Mat P = sys.G[c[2]] * sys.G[c[1]] * sys.G[c[0]];
    double sc = sys.G[c[0]].norm() * sys.G[c[1]].norm() * sys.G[c[2]].norm();
    r.three_cycle = std::max(r.three_cycle, rel(P + I, sc));
  }
  (void)ctx;
  return r;
}

void require_valid(const FramedSystem &sys, const Ctx &ctx) {
  auto r = validate(sys, ctx);
  if (!(r.max() <= std::sqrt(ctx.tol)))
    throw PreconditionError("system violates the framed twisted relations (residual " +
                            std::to_string(r.max()) + ")");
}

int mu_T(const FramedSystem &sys, int face, const Ctx &ctx) {
  // the three M around a face are congruent; decide on the best conditioned
  // one and cross-check the others only where they are well conditioned
  auto c = face_cycle(sys.q, face);
  int sig[3];
  double ratio[3];
  for (int i = 0; i < 3; ++i) {
    Mat M = block_M(sys.G[c[i]], ctx);
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    double sc = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    ratio[i] = es.eigenvalues().cwiseAbs().minCoeff() / sc;
    sig[i] = signature(M, ctx.tol * sc);
  }
  int best = int(std::max_element(ratio, ratio + 3) - ratio);
  if (ratio[best] <= ctx.tol)
    throw PreconditionError("mu_T: M is singular, the face is not transverse");
  for (int i = 0; i < 3; ++i)
    if (ratio[i] > std::sqrt(ctx.tol) && sig[i] != sig[best])
      throw PreconditionError("mu_T: signatures of M disagree around the face");
  return sig[best];
}

double toledo(const FramedSystem &sys, const Ctx &ctx) {
  if (sys.q.T.surf.r() != 0)
    throw PreconditionError("toledo: needs a surface without marked points (r = 0)");
  int sum = 0;
  for (int f = 0; f < sys.q.T.faces(); ++f)
    sum += mu_T(sys, f, ctx);
  return -0.5 * sum;
}

bool is_maximal(const FramedSystem &sys, const Ctx &ctx) {
  for (int a = 0; a < sys.q.T.slots(); ++a) {
    Mat M;
    try {
      M = block_M(sys.G[a], ctx);
    } catch (const PreconditionError &) {
      return false;
    }
    double sc = std::max(1.0, M.norm());
    if (!is_pos_def(M, ctx.tol * sc))
      return false;
  }
  return true;
}

std::pair<Mat, Mat> vertex_pair(const FramedSystem &sys, int v, const Ctx &ctx) {
  const auto &q = sys.q;
  int a = q.a2_into(v);
  if (a < 0)
    throw PreconditionError("vertex_pair: vertex is external");
  int w = q.arrows[a].from;
  Mat X = inv_checked(block_M(sys.G[q.a3_into(v)], ctx), "vertex_pair: M singular", ctx);
  Mat Xw = inv_checked(block_M(sys.G[q.a3_into(w)], ctx), "vertex_pair: M singular", ctx);
  Mat B = block_C(sys.G[a]);
  Mat Z = symmetrize(B * inv_checked(Xw, "vertex_pair: X singular", ctx) * B.transpose());
  return {symmetrize(X), Z};
}

Mat vertex_cross_ratio(const FramedSystem &sys, int v, const Ctx &ctx) {
  const auto &q = sys.q;
  int n = sys.n;
  int a = q.a2_into(v);
  if (a < 0)
    throw PreconditionError("vertex_cross_ratio: vertex is external");
  int w = q.arrows[a].from;
  Mat e = Mat::Identity(2 * n, 2 * n).leftCols(n);
  Lagrangian Lt = make_lag(e, ctx), Lb = L0perp(n);
  // third corners of the two faces, transported into F_v
  Lagrangian M1 = apply(sys.G[q.a3_into(v)], Lt, ctx);
  Lagrangian M2 = apply(sys.G[a] * sys.G[q.a3_into(w)], Lt, ctx);
  return cross_ratio({Lt, M1, Lb, M2}, e, ctx);
}

Mat corner_angle_invariant(const FramedSystem &sys, int a3, const Ctx &ctx) {
  const auto &q = sys.q;
  if (a3 < 0 || a3 >= q.T.slots())
    throw PreconditionError("corner_angle_invariant: not an A3 arrow");
  int n = sys.n;
  double tol = std::sqrt(ctx.tol);
  for (int a = 0; a < q.T.slots(); ++a)
    if ((block_M(sys.G[a], ctx) - Mat::Identity(n, n)).norm() > tol)
      throw PreconditionError("not in diagonal gauge: some M differs from Id");
  for (size_t a = q.T.slots(); a < q.arrows.size(); ++a) {
    Mat B = block_C(sys.G[a]);
    Mat off = B;
    off.diagonal().setZero();
    if (off.norm() > tol * std::max(1.0, B.norm()) || B.diagonal().minCoeff() <= 0)
      throw PreconditionError("not in diagonal gauge: some B is not positive diagonal");
  }
  return block_C(sys.G[a3]);
}

FramedSystem gauge(const FramedSystem &sys, const std::vector<Mat> &psi) {
  if (int(psi.size()) != sys.q.n_vertices())
    throw PreconditionError("gauge: one matrix per vertex expected");
  FramedSystem out = sys;
  for (size_t a = 0; a < sys.q.arrows.size(); ++a) {
    auto &x = sys.q.arrows[a];
    out.G[a] = psi[x.to] * sys.G[a] *
               inv_checked(psi[x.from], "gauge: singular vertex matrix");
  }
  return out;
}

double gauge_residual(const FramedSystem &a, const std::vector<Mat> &psi,
                      const FramedSystem &b) {
  auto g = gauge(a, psi);
  double r = 0;
  for (size_t i = 0; i < g.G.size(); ++i)
    r = std::max(r, rel_err(g.G[i], b.G[i]));
  return r;
}

Mat boundary_holonomy(const FramedSystem &sys, int label) {
  auto cyc = boundary_cycle(sys.q, label);
  Mat H = Mat::Identity(2 * sys.n, 2 * sys.n);
  for (int a : cyc)
    H = sys.G[a] * H;
  return H;
}

FramedSystem flip_system(const FramedSystem &sys, int slot, const Ctx &ctx) {
  require_valid(sys, ctx);
  const auto &T = sys.q.T;
  const auto &q = sys.q;
  auto m = flip_slot_map(T, slot);
  auto U = flip(T, slot);
  FramedSystem out;
  out.q = build_quiver(U);
  out.n = sys.n;
  int n = sys.n, N = 2 * n;
  out.G.assign(out.q.arrows.size(), Mat());
  int f = slot / 3, s = slot % 3, w = T.partner[slot], f2 = w / 3, s2 = w % 3;
  auto sl = [](int face, int k) { return 3 * face + ((k % 3) + 3) % 3; };
  auto G = [&](int a) -> const Mat & { return sys.G[a]; };
  int a2_fw = q.a2_out(slot); // (f,s) → (f2,s2)
  int a2_wf = q.a2_out(w);
  // untouched A3 arrows
  for (int face = 0; face < T.faces(); ++face)
    if (face != f && face != f2)
      for (int k = 0; k < 3; ++k)
        out.G[3 * face + k] = G(3 * face + k);
  // A2 arrows of surviving edges keep their matrices
  for (size_t a = T.slots(); a < q.arrows.size(); ++a) {
    int u = q.arrows[a].from, v = q.arrows[a].to;
    if (u == slot || u == w)
      continue;
    out.G[out.q.a2_out(m[u])] = G(int(a));
    (void)v;
  }
  // paths around the corners P and Q of the old quadrilateral
  Mat gP = G(sl(f, s)) * G(a2_wf) * G(sl(f2, s2 + 1));
  Mat gQ = G(sl(f2, s2)) * G(a2_fw) * G(sl(f, s + 1));
  Mat I = Mat::Identity(N, N);
  auto frame = [&](const Mat &g) {
    // e spans the old L^b (last n coordinates), f spans g(span e0)
    Mat e = I.rightCols(n);
    Lagrangian L = make_lag(g * I.leftCols(n), ctx);
    Mat fb = dual_basis(e, L, ctx);
    Mat psi(N, N);
    psi << e, fb;
    return psi;
  };
  Mat psiA = frame(gP), psiB = frame(gQ);
  Mat psiAi = inv_checked(psiA, "flip: new frame singular", ctx);
  Mat psiBi = inv_checked(psiB, "flip: new frame singular", ctx);
  // new face A = [R,P,S] at index f, B = [S,Q,R] at index f2
  out.G[3 * f + 0] = psiAi;
  out.G[3 * f + 1] = gP;
  out.G[3 * f + 2] = -inv_checked(gP, "flip: corner path", ctx) * psiA;
  out.G[3 * f2 + 0] = psiBi;
  out.G[3 * f2 + 1] = gQ;
  out.G[3 * f2 + 2] = -inv_checked(gQ, "flip: corner path", ctx) * psiB;
  Mat gX = psiBi * gQ * G(sl(f, s + 2)) * psiA;
  out.G[out.q.a2_out(3 * f + 2)] = gX;
  out.G[out.q.a2_out(3 * f2 + 2)] = -inv_checked(gX, "flip: diagonal", ctx);
  return out;
}

} // namespace symp
