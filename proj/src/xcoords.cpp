#include "symp/xcoords.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace symp {

namespace {

Mat eye(int n) { return Mat::Identity(n, n); }

bool is_a2(const Quiver &q, int a) { return q.arrows[a].kind == ArrowKind::A2; }

int face_of(int v) { return v / 3; }

// face arrows c0: w0→w1, c1: w1→w2, c2: w2→w0 with w = (3f, 3f+2, 3f+1)
struct FaceArrows {
  std::array<int, 3> c, w;
};
FaceArrows face_arrows(const Quiver &q, int f) {
  auto c = face_cycle(q, f);
  return {c, {q.arrows[c[0]].from, q.arrows[c[1]].from, q.arrows[c[2]].from}};
}

// K with S = K·I_{p,q}·ᵀK, positive directions first
Mat signed_frame(const Mat &S, int &p, const Ctx &ctx) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S));
  int n = int(S.rows());
  Vec ev = es.eigenvalues();
  double sc = std::max(1.0, ev.cwiseAbs().maxCoeff());
  Mat K(n, n);
  int col = 0;
  p = 0;
  for (int pass = 0; pass < 2; ++pass)
    for (int i = n - 1; i >= 0; --i) {
      if (std::abs(ev(i)) <= ctx.tol * sc)
        throw PreconditionError("signed frame: singular symmetric matrix");
      if ((pass == 0) != (ev(i) > 0))
        continue;
      K.col(col++) = es.eigenvectors().col(i) * std::sqrt(std::abs(ev(i)));
      if (pass == 0)
        ++p;
    }
  return K;
}

// Cayley transform of a random element of o(p,q), optionally times a
// reflection in each factor
Mat rand_opq(Rng &rng, int p, int q, double scale) {
  int n = p + q;
  Mat A = rand_mat(rng, n, n) * scale;
  A = (0.5 * (A - A.transpose())).eval();
  Mat X = A * Ipq(p, q);
  Mat O = (eye(n) + X) * (eye(n) - X).inverse();
  std::uniform_int_distribution<int> coin(0, 1);
  if (p > 0 && coin(rng)) {
    Mat R = eye(n);
    R(0, 0) = -1;
    O = O * R;
  }
  if (q > 0 && coin(rng)) {
    Mat R = eye(n);
    R(n - 1, n - 1) = -1;
    O = O * R;
  }
  return O;
}

Mat sym_fun(const Mat &S, const std::function<double(double)> &f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S));
  Vec d = es.eigenvalues().unaryExpr(f);
  return symmetrize(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
}

} // namespace

Mat Ipq(int p, int q) {
  Mat m = Mat::Identity(p + q, p + q);
  for (int i = p; i < p + q; ++i)
    m(i, i) = -1;
  return m;
}

std::vector<int> default_E(const Quiver &q) {
  std::vector<int> E;
  for (int a = q.T.slots(); a < int(q.arrows.size()); ++a) {
    int b = q.partner_arrow(a);
    if (q.arrows[a].from < q.arrows[b].from)
      E.push_back(a);
  }
  return E;
}

// ---------------------------------------------------------------- X⁺

double xplus_residual(const Quiver &q, const XPlus &x, bool delta) {
  if (x.x.size() != q.arrows.size())
    throw PreconditionError("coordinates: one matrix per arrow expected");
  int n = x.n;
  double r = 0;
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    const Mat &m = x.x[a];
    if (m.rows() != n || m.cols() != n)
      throw PreconditionError("coordinates: matrix of wrong size");
    if (is_a2(q, int(a))) {
      r = std::max(r, (m - m.transpose()).norm());
      r = std::max(r, (m - x.x[q.partner_arrow(int(a))]).norm());
      Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m));
      if (es.eigenvalues().minCoeff() <= 0)
        r = std::max(r, 1.0);
      if (delta) {
        Mat off = m;
        off.diagonal().setZero();
        r = std::max(r, off.norm());
        for (int i = 0; i + 1 < n; ++i)
          r = std::max(r, std::max(0.0, m(i, i) - m(i + 1, i + 1)));
      }
    } else {
      r = std::max(r, (m.transpose() * m - eye(n)).norm());
    }
  }
  for (int f = 0; f < q.T.faces(); ++f) {
    auto c = face_cycle(q, f);
    r = std::max(r, (x.x[c[2]] * x.x[c[1]] * x.x[c[0]] - eye(n)).norm());
  }
  return r;
}

void require_xplus(const Quiver &q, const XPlus &x, bool delta, const Ctx &ctx) {
  double r = xplus_residual(q, x, delta);
  if (!(r <= std::sqrt(ctx.tol)))
    throw PreconditionError("positive coordinates violate their constraints (residual " +
                            std::to_string(r) + ")");
}

FramedSystem hol_xplus(const Quiver &q, const XPlus &x, const Ctx &ctx) {
  require_xplus(q, x, false, ctx);
  FramedSystem s;
  s.q = q;
  s.n = x.n;
  int n = x.n;
  Mat Z = Mat::Zero(n, n);
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    const Mat &m = x.x[a];
    if (is_a2(q, int(a)))
      s.G.push_back(blocks(Z, -sym_invsqrt(m, ctx), sym_sqrt(m, ctx), Z));
    else
      s.G.push_back(blocks(m, -m, m, Z));
  }
  return s;
}

XPlusExtract extract_xplus(const FramedSystem &sys, const Ctx &ctx) {
  require_valid(sys, ctx);
  if (!is_maximal(sys, ctx))
    throw PreconditionError("extract_xplus: system is not maximal");
  const auto &q = sys.q;
  int n = sys.n, V = q.n_vertices();
  std::vector<Mat> X(V), P(V);
  for (int v = 0; v < V; ++v)
    X[v] = inv_checked(block_M(sys.G[q.a3_into(v)], ctx), "extract: M singular", ctx);
  XPlusExtract out;
  out.x.n = n;
  out.x.x.assign(q.arrows.size(), Mat());
  for (int v = 0; v < V; ++v)
    if (q.external(v))
      P[v] = sym_invsqrt(X[v], ctx);
  for (int a : default_E(q)) {
    int v = q.arrows[a].to, w = q.arrows[a].from;
    auto [Xv, Zv] = vertex_pair(sys, v, ctx);
    Mat h = sym_invsqrt(Xv, ctx);
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(h * Zv * h));
    if (es.eigenvalues().minCoeff() <= 0)
      throw PreconditionError("extract_xplus: vertex quadruple is not positive");
    P[v] = h * es.eigenvectors();
    Mat lam = es.eigenvalues().asDiagonal();
    Mat root = es.eigenvalues().cwiseSqrt().asDiagonal();
    Mat B = block_C(sys.G[a]);
    P[w] = inv_checked(B, "extract: B singular", ctx) *
           inv_checked(P[v], "extract: frame", ctx).transpose() * root;
    out.x.x[a] = lam;
    out.x.x[q.partner_arrow(a)] = lam;
  }
  for (int a = 0; a < q.T.slots(); ++a) {
    int u = q.arrows[a].from, v = q.arrows[a].to;
    out.x.x[a] = P[v].transpose() * block_C(sys.G[a]) * P[u];
  }
  out.psi.resize(V);
  for (int v = 0; v < V; ++v)
    out.psi[v] = diag2(inv_checked(P[v], "extract: frame", ctx), P[v].transpose());
  return out;
}

XPlus fiber_act(const Quiver &q, const XPlus &x, const std::vector<Mat> &r, const Ctx &ctx) {
  if (int(r.size()) != q.n_vertices())
    throw PreconditionError("fiber_act: one matrix per vertex expected");
  double tol = std::sqrt(ctx.tol);
  int n = x.n;
  for (auto &m : r)
    if ((m.transpose() * m - eye(n)).norm() > tol)
      throw PreconditionError("fiber_act: r is not orthogonal");
  XPlus y = x;
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    int u = q.arrows[a].from, v = q.arrows[a].to;
    if (is_a2(q, int(a))) {
      if ((r[u] - r[v]).norm() > tol)
        throw PreconditionError("fiber_act: r differs across a 2-cycle");
      if ((r[v] * x.x[a] - x.x[a] * r[v]).norm() > tol * std::max(1.0, x.x[a].norm()))
        throw PreconditionError("fiber_act: r does not commute with an edge value");
    }
    y.x[a] = r[v] * x.x[a] * r[u].transpose();
  }
  return y;
}

std::vector<Mat> fiber_gauge(const std::vector<Mat> &r) {
  std::vector<Mat> psi;
  for (auto &m : r)
    psi.push_back(diag2(m, m));
  return psi;
}

Normalized normalize_to_tree(const Quiver &q, const XPlus &x, const SpanningData &sd,
                             const Ctx &ctx) {
  require_xplus(q, x, false, ctx);
  const auto &T = q.T;
  int n = x.n, nodes = T.n_edges();
  std::vector<Mat> rn(nodes);
  int root = sd.a0 >= 0 ? T.edge_of(q.arrows[sd.a0].from) : 0;
  if (sd.a0 >= 0) {
    const Mat &x0 = x.x[sd.a0];
    Mat off = x0;
    off.diagonal().setZero();
    bool sorted = true;
    for (int i = 0; i + 1 < n; ++i)
      sorted = sorted && x0(i, i) <= x0(i + 1, i + 1);
    if (off.norm() <= ctx.tol * std::max(1.0, x0.norm()) && sorted) {
      rn[root] = eye(n);
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(x0));
      rn[root] = es.eigenvectors().transpose();
    }
  } else {
    rn[root] = eye(n);
  }
  // breadth-first along the tree
  std::vector<char> done(nodes, 0);
  done[root] = 1;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int a : sd.S) {
      int nm = T.edge_of(q.arrows[a].from), np = T.edge_of(q.arrows[a].to);
      if (done[nm] && !done[np]) {
        rn[np] = rn[nm] * x.x[a].transpose();
        done[np] = 1;
        progress = true;
      } else if (done[np] && !done[nm]) {
        rn[nm] = rn[np] * x.x[a];
        done[nm] = 1;
        progress = true;
      }
    }
  }
  for (int i = 0; i < nodes; ++i)
    if (!done[i])
      throw PreconditionError("normalize_to_tree: S is not spanning");
  Normalized out;
  out.r.resize(q.n_vertices());
  for (int v = 0; v < q.n_vertices(); ++v)
    out.r[v] = rn[T.edge_of(v)];
  out.x = x;
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    int u = q.arrows[a].from, v = q.arrows[a].to;
    out.x.x[a] = out.r[v] * x.x[a] * out.r[u].transpose();
    if (is_a2(q, int(a)))
      out.x.x[a] = symmetrize(out.x.x[a]);
  }
  for (int a : sd.S)
    out.x.x[a] = eye(n);
  return out;
}

Equiv same_orbit(const Quiver &q, const XPlus &x, const XPlus &y, const SpanningData &sd,
                 const Ctx &ctx) {
  const auto &T = q.T;
  int n = x.n, nodes = T.n_edges();
  double tol = std::sqrt(ctx.tol);
  int a0 = sd.a0 >= 0 ? sd.a0 : (q.n_a2() ? T.slots() : -1);
  if (a0 < 0)
    return Equiv::Indeterminate;
  Eigen::SelfAdjointEigenSolver<Mat> ex(symmetrize(x.x[a0])), ey(symmetrize(y.x[a0]));
  if ((ex.eigenvalues() - ey.eigenvalues()).norm() > tol * std::max(1.0, x.x[a0].norm()))
    return Equiv::No;
  Vec ev = ex.eigenvalues();
  for (int i = 0; i + 1 < n; ++i)
    if (ev(i + 1) - ev(i) <= tol * std::max(1.0, ev.cwiseAbs().maxCoeff()))
      return Equiv::Indeterminate;
  int root = T.edge_of(q.arrows[a0].from);
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec d(n);
    for (int i = 0; i < n; ++i)
      d(i) = (mask >> i) & 1 ? -1.0 : 1.0;
    std::vector<Mat> rn(nodes);
    std::vector<char> done(nodes, 0);
    rn[root] = ey.eigenvectors() * d.asDiagonal() * ex.eigenvectors().transpose();
    done[root] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      for (int a : sd.S) {
        int nm = T.edge_of(q.arrows[a].from), np = T.edge_of(q.arrows[a].to);
        if (done[nm] && !done[np]) {
          rn[np] = y.x[a] * rn[nm] * x.x[a].transpose();
          done[np] = progress = 1;
        } else if (done[np] && !done[nm]) {
          rn[nm] = y.x[a].transpose() * rn[np] * x.x[a];
          done[nm] = progress = 1;
        }
      }
    }
    bool ok = std::all_of(done.begin(), done.end(), [](char c) { return c; });
    for (size_t a = 0; a < q.arrows.size() && ok; ++a) {
      int u = T.edge_of(q.arrows[a].from), v = T.edge_of(q.arrows[a].to);
      Mat pred = rn[v] * x.x[a] * rn[u].transpose();
      ok = (pred - y.x[a]).norm() <= tol * std::max(1.0, y.x[a].norm());
    }
    if (ok)
      return Equiv::Yes;
  }
  return Equiv::No;
}

XPlus rand_xplus_delta(const Quiver &q, int n, Rng &rng) {
  std::uniform_real_distribution<double> U(0.3, 3.0);
  XPlus x;
  x.n = n;
  x.x.assign(q.arrows.size(), Mat());
  for (int a : default_E(q)) {
    Vec d(n);
    for (int i = 0; i < n; ++i)
      d(i) = U(rng);
    std::sort(d.data(), d.data() + n);
    x.x[a] = d.asDiagonal();
    x.x[q.partner_arrow(a)] = x.x[a];
  }
  for (int f = 0; f < q.T.faces(); ++f) {
    auto c = face_cycle(q, f);
    x.x[c[0]] = rand_orth(rng, n);
    x.x[c[1]] = rand_orth(rng, n);
    x.x[c[2]] = (x.x[c[1]] * x.x[c[0]]).transpose();
  }
  return x;
}

XPlus rand_xs(const Quiver &q, const SpanningData &sd, int n, Rng &rng) {
  XPlus x;
  x.n = n;
  x.x.assign(q.arrows.size(), Mat());
  for (int a : sd.E) {
    x.x[a] = rand_spd(rng, n);
    x.x[q.partner_arrow(a)] = x.x[a];
  }
  std::set<int> S(sd.S.begin(), sd.S.end()), R(sd.R.begin(), sd.R.end());
  for (int f = 0; f < q.T.faces(); ++f) {
    auto c = face_cycle(q, f);
    int missing = -1;
    for (int i = 0; i < 3; ++i) {
      if (S.count(c[i]))
        x.x[c[i]] = eye(n);
      else if (R.count(c[i]))
        x.x[c[i]] = rand_orth(rng, n);
      else
        missing = i;
    }
    if (missing < 0)
      throw PreconditionError("rand_xs: a face has all three arrows fixed");
    // x[c2] x[c1] x[c0] = Id
    const Mat &m0 = x.x[c[0]], &m1 = x.x[c[1]], &m2 = x.x[c[2]];
    if (missing == 0)
      x.x[c[0]] = (m2 * m1).transpose();
    else if (missing == 1)
      x.x[c[1]] = m2.transpose() * m0.transpose();
    else
      x.x[c[2]] = (m1 * m0).transpose();
  }
  return x;
}

// ---------------------------------------------------------------- X_E

double xe_residual(const Quiver &q, const XE &x, const Ctx &ctx) {
  int n = x.n;
  if (x.en.size() != q.arrows.size() || x.Y.size() != q.arrows.size() ||
      int(x.S.size()) != q.n_vertices())
    throw PreconditionError("XE: wrong number of entries");
  double r = 0;
  for (size_t a = q.T.slots(); a < q.arrows.size(); ++a) {
    validate(x.en[a]);
    if (x.en[a].dn.n() != n)
      throw PreconditionError("XE: edge datum of wrong size");
    if (!en_close(x.en[q.partner_arrow(int(a))], iota(x.en[a]), 1e-12))
      r = std::max(r, 1.0);
    r = std::max(r, (x.S[q.arrows[a].to] - assemble(x.en[a], false).C).norm());
  }
  for (int v = 0; v < q.n_vertices(); ++v) {
    const Mat &S = x.S[v];
    if (S.rows() != n || S.cols() != n)
      throw PreconditionError("XE: S of wrong size");
    if (q.external(v)) {
      int p = 0;
      while (p < n && S(p, p) > 0)
        ++p;
      r = std::max(r, (S - Ipq(p, n - p)).norm());
    }
  }
  for (int f = 0; f < q.T.faces(); ++f) {
    auto fa = face_arrows(q, f);
    for (int k = 0; k < 3; ++k) {
      int out = fa.c[k], opp = fa.c[(k + 1) % 3], in = fa.c[(k + 2) % 3];
      Mat lhs = x.Y[in] *
                inv_checked(x.Y[opp], "XE: Y singular", ctx).transpose() * x.Y[out];
      r = std::max(r, rel_err(lhs, x.S[fa.w[k]]));
    }
  }
  return r;
}

FramedSystem hol_xE(const Quiver &q, const XE &x, const Ctx &ctx) {
  double res = xe_residual(q, x, ctx);
  if (!(res <= std::sqrt(ctx.tol)))
    throw PreconditionError("hol_xE: coordinates violate their relations (residual " +
                            std::to_string(res) + ")");
  FramedSystem s;
  s.q = q;
  s.n = x.n;
  int n = x.n;
  Mat Z = Mat::Zero(n, n);
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    if (is_a2(q, int(a))) {
      Mat Phi = assemble(x.en[a]).Phi;
      s.G.push_back(blocks(Z, -inv_checked(Phi, "Φ", ctx).transpose(), Phi, Z));
    } else {
      const Mat &Y = x.Y[a];
      Mat Si = inv_checked(x.S[q.arrows[a].to], "hol_xE: S singular", ctx);
      s.G.push_back(blocks(Si * Y, -inv_checked(Y, "Y", ctx).transpose(), Y, Z));
    }
  }
  return s;
}

// edge data whose C has signature s and whose ι has signature s2
static ENData rand_edge(Rng &rng, int n, int s, int s2, const XEOptions &opt) {
  for (int t = 0; t < 400; ++t) {
    auto e = rand_en(rng, n, opt.p_complex, opt.p_repeat);
    if (signature_of_C(e.dn) == s && signature_of_C(iota(e.dn)) == s2)
      return e;
  }
  ENData e;
  e.dn = realize_maslov_pair(s, s2, n);
  std::uniform_real_distribution<double> U(0.5, 3.0);
  for (int x = 0; x < 4; ++x) {
    for (size_t j = 0; j < e.dn.fam[x].size(); ++j)
      e.lam[x].push_back(fam_eps(x) * fam_eta(x) * (U(rng) + 4.0 * j));
  }
  for (size_t j = 0; j < e.dn.m2.size(); ++j)
    e.lamC.push_back(cplx(U(rng) + 4.0 * j, U(rng)));
  sort_en(e);
  validate(e);
  return e;
}

XE rand_xe(const Quiver &q, int n, Rng &rng, const XEOptions &opt) {
  int F = q.T.faces();
  std::vector<int> sig = opt.face_sig;
  if (sig.empty())
    for (int f = 0; f < F; ++f)
      sig.push_back(-n + 2 * int(rng() % (n + 1)));
  if (int(sig.size()) != F)
    throw PreconditionError("rand_xe: one signature per face expected");
  Ctx ctx;
  XE x;
  x.n = n;
  x.en.assign(q.arrows.size(), ENData());
  x.S.assign(q.n_vertices(), Mat());
  x.Y.assign(q.arrows.size(), Mat());
  for (int a : default_E(q)) {
    int v = q.arrows[a].to, w = q.arrows[a].from;
    auto e = rand_edge(rng, n, sig[face_of(v)], sig[face_of(w)], opt);
    x.en[a] = e;
    x.en[q.partner_arrow(a)] = iota(e);
    x.S[v] = assemble(e, false).C;
    x.S[w] = assemble(iota(e), false).C;
  }
  for (int v = 0; v < q.n_vertices(); ++v)
    if (q.external(v)) {
      int s = sig[face_of(v)];
      x.S[v] = Ipq((n + s) / 2, (n - s) / 2);
    }
  for (int f = 0; f < F; ++f) {
    auto fa = face_arrows(q, f);
    std::array<Mat, 3> K;
    int p = 0;
    for (int k = 0; k < 3; ++k)
      K[k] = signed_frame(x.S[fa.w[k]], p, ctx);
    int qq = n - p;
    // Y0: w0→w1 and Y1: w1→w2 are isometries, Y2 closes the cycle
    Mat Y0 = K[1] * rand_opq(rng, p, qq, 0.6) * K[0].transpose();
    Mat Y1 = K[2] * rand_opq(rng, p, qq, 0.6) * K[1].transpose();
    Mat Y2 = x.S[fa.w[0]] * Y0.inverse() * Y1.transpose();
    x.Y[fa.c[0]] = Y0;
    x.Y[fa.c[1]] = Y1;
    x.Y[fa.c[2]] = Y2;
  }
  return x;
}

XEExtract extract_xE(const FramedSystem &sys, const Ctx &ctx) {
  require_valid(sys, ctx);
  const auto &q = sys.q;
  int n = sys.n, V = q.n_vertices();
  std::vector<Mat> P(V);
  XEExtract out;
  auto &x = out.x;
  x.n = n;
  x.en.assign(q.arrows.size(), ENData());
  x.S.assign(V, Mat());
  x.Y.assign(q.arrows.size(), Mat());
  for (int v = 0; v < V; ++v)
    if (q.external(v)) {
      Mat X = inv_checked(block_M(sys.G[q.a3_into(v)], ctx), "extract_xE: M singular", ctx);
      int p = 0;
      Mat K = signed_frame(X, p, ctx);
      P[v] = inv_checked(K, "extract_xE: frame", ctx).transpose();
      x.S[v] = Ipq(p, n - p);
    }
  for (int a : default_E(q)) {
    int v = q.arrows[a].to, w = q.arrows[a].from;
    Mat X, Z;
    try {
      std::tie(X, Z) = vertex_pair(sys, v, ctx);
    } catch (const PreconditionError &) {
      throw PreconditionError("extract_xE: vertex " + std::to_string(v) + " is not transverse");
    }
    auto nf = classify_pair(X, Z, ctx);
    auto A = assemble(nf.en);
    P[v] = nf.P;
    Mat B = block_C(sys.G[a]);
    P[w] = inv_checked(B, "extract_xE: B singular", ctx) *
           inv_checked(P[v], "extract_xE: frame", ctx).transpose() * A.Phi;
    x.en[a] = nf.en;
    x.en[q.partner_arrow(a)] = iota(nf.en);
    x.S[v] = A.C;
    x.S[w] = assemble(iota(nf.en), false).C;
  }
  for (int a = 0; a < q.T.slots(); ++a) {
    int u = q.arrows[a].from, v = q.arrows[a].to;
    x.Y[a] = P[v].transpose() * block_C(sys.G[a]) * P[u];
  }
  out.psi.resize(V);
  for (int v = 0; v < V; ++v)
    out.psi[v] = diag2(inv_checked(P[v], "extract_xE: frame", ctx), P[v].transpose());
  return out;
}

// ---------------------------------------------------------------- over

XOver over_from_xe(const Quiver &q, const XE &x) {
  XOver z;
  z.n = x.n;
  z.S = x.S;
  z.Y = x.Y;
  for (size_t a = q.T.slots(); a < q.arrows.size(); ++a)
    z.Y[a] = assemble(x.en[a]).Phi;
  return z;
}

double xover_residual(const Quiver &q, const XOver &z) {
  if (z.Y.size() != q.arrows.size() || int(z.S.size()) != q.n_vertices())
    throw PreconditionError("XOver: wrong number of entries");
  double r = 0;
  for (auto &S : z.S) {
    r = std::max(r, (S - S.transpose()).norm());
    if (!Eigen::FullPivLU<Mat>(S).isInvertible())
      r = std::max(r, 1.0);
  }
  for (size_t a = q.T.slots(); a < q.arrows.size(); ++a)
    r = std::max(r, rel_err(z.Y[q.partner_arrow(int(a))], z.Y[a].transpose()));
  for (int f = 0; f < q.T.faces(); ++f) {
    auto fa = face_arrows(q, f);
    for (int k = 0; k < 3; ++k) {
      int out = fa.c[k], opp = fa.c[(k + 1) % 3], in = fa.c[(k + 2) % 3];
      Mat lhs = z.Y[in] * z.Y[opp].inverse().transpose() * z.Y[out];
      r = std::max(r, rel_err(lhs, z.S[fa.w[k]]));
    }
  }
  return r;
}

FramedSystem hol_over(const Quiver &q, const XOver &z, const Ctx &ctx) {
  double res = xover_residual(q, z);
  if (!(res <= std::sqrt(ctx.tol)))
    throw PreconditionError("hol_over: coordinates violate their relations (residual " +
                            std::to_string(res) + ")");
  FramedSystem s;
  s.q = q;
  s.n = z.n;
  Mat Zr = Mat::Zero(z.n, z.n);
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    const Mat &Y = z.Y[a];
    Mat Yit = inv_checked(Y, "hol_over: Y singular", ctx).transpose();
    if (is_a2(q, int(a)))
      s.G.push_back(blocks(Zr, -Yit, Y, Zr));
    else
      s.G.push_back(blocks(inv_checked(z.S[q.arrows[a].to], "S", ctx) * Y, -Yit, Y, Zr));
  }
  return s;
}

XOver gauge_over(const Quiver &q, const XOver &z, const std::vector<Mat> &g) {
  if (int(g.size()) != q.n_vertices())
    throw PreconditionError("gauge_over: one matrix per vertex expected");
  XOver o = z;
  for (int v = 0; v < q.n_vertices(); ++v)
    o.S[v] = symmetrize(g[v] * z.S[v] * g[v].transpose());
  for (size_t a = 0; a < q.arrows.size(); ++a)
    o.Y[a] = g[q.arrows[a].to] * z.Y[a] * g[q.arrows[a].from].transpose();
  return o;
}

std::vector<Mat> over_gauge_symplectic(const std::vector<Mat> &g) {
  std::vector<Mat> psi;
  for (auto &m : g)
    psi.push_back(diag2(m.inverse().transpose(), m));
  return psi;
}

ZClass pi_components(const Quiver &q, const XOver &z, const Ctx &ctx) {
  ZClass c;
  for (auto &S : z.S) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S));
    double sc = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    c.s.push_back(signature(S, ctx.tol * sc));
  }
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    double d = z.Y[a].determinant();
    if (d == 0)
      throw PreconditionError("pi_components: singular Y");
    c.h.push_back(d > 0 ? 1 : -1);
  }
  return c;
}

bool in_Z(const Quiver &q, int n, const ZClass &c) {
  if (int(c.s.size()) != q.n_vertices() || c.h.size() != q.arrows.size())
    return false;
  for (int s : c.s)
    if (std::abs(s) > n || (n - s) % 2)
      return false;
  for (int h : c.h)
    if (h != 1 && h != -1)
      return false;
  for (size_t a = q.T.slots(); a < q.arrows.size(); ++a)
    if (c.h[a] != c.h[q.partner_arrow(int(a))])
      return false;
  for (int f = 0; f < q.T.faces(); ++f) {
    auto fa = face_arrows(q, f);
    int s = c.s[fa.w[0]];
    if (c.s[fa.w[1]] != s || c.s[fa.w[2]] != s)
      return false;
    int want = ((n - s) / 2) % 2 ? -1 : 1;
    if (c.h[fa.c[0]] * c.h[fa.c[1]] * c.h[fa.c[2]] != want)
      return false;
  }
  return true;
}

ZClass act_FZ(const Quiver &q, const ZClass &c, const std::vector<int> &eps) {
  ZClass o = c;
  for (size_t a = 0; a < q.arrows.size(); ++a)
    o.h[a] = c.h[a] * eps[q.arrows[a].from] * eps[q.arrows[a].to];
  return o;
}

bool same_FZ_orbit(const Quiver &q, const ZClass &a, const ZClass &b) {
  if (a.s != b.s || a.h.size() != b.h.size())
    return false;
  int V = q.n_vertices();
  std::vector<int> eps(V, 0);
  eps[0] = 1;
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i < q.arrows.size(); ++i) {
      int u = q.arrows[i].from, v = q.arrows[i].to, d = a.h[i] * b.h[i];
      if (eps[u] && !eps[v]) {
        eps[v] = eps[u] * d;
        progress = true;
      } else if (eps[v] && !eps[u]) {
        eps[u] = eps[v] * d;
        progress = true;
      }
    }
  }
  if (std::count(eps.begin(), eps.end(), 0))
    return false;
  return act_FZ(q, a, eps) == b;
}

long long count_components(const Triangulation &T, int n, CountMode mode, int xG) {
  if (n < 1 || xG < 1)
    throw PreconditionError("count_components: n and x_G must be positive");
  int e = T.surf.e(), r = T.surf.r();
  auto pw = [](long long b, int k) {
    long long out = 1;
    for (int i = 0; i < k; ++i)
      out *= b;
    return out;
  };
  switch (mode) {
  case CountMode::Transverse:
    return pw(2, e + 1) * pw(n + 1, 2 * e + r);
  case CountMode::Maximal:
    return pw(2, e + 1);
  case CountMode::Isogenic:
    return pw(xG, e + 1) * pw(n + 1, 2 * e + r);
  case CountMode::IsogenicMaximal:
    return pw(xG, e + 1);
  }
  return 0;
}

long long brute_force_components(const Quiver &q, int n, bool maximal) {
  // free signs: one per 2-cycle and one per A3 arrow; face signatures
  std::vector<int> E = default_E(q);
  int F = q.T.faces(), N3 = q.T.slots();
  int bits = int(E.size()) + N3;
  if (bits > 22)
    throw PreconditionError("brute_force_components: too large");
  std::vector<std::vector<int>> sigs{{}};
  for (int f = 0; f < F; ++f) {
    std::vector<std::vector<int>> nxt;
    for (auto &s : sigs)
      for (int x = -n; x <= n; x += 2) {
        if (maximal && x != n)
          continue;
        auto t = s;
        t.push_back(x);
        nxt.push_back(t);
      }
    sigs = nxt;
  }
  // canonical representative: gauge h to +1 along a spanning tree of the
  // underlying graph of the quiver
  int V = q.n_vertices();
  std::vector<int> tree;
  {
    std::vector<char> seen(V, 0);
    seen[0] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t a = 0; a < q.arrows.size(); ++a) {
        int u = q.arrows[a].from, v = q.arrows[a].to;
        if (seen[u] != seen[v]) {
          seen[u] = seen[v] = 1;
          tree.push_back(int(a));
          progress = true;
        }
      }
    }
  }
  std::set<std::vector<int>> reps;
  for (auto &fs : sigs) {
    ZClass c;
    for (int v = 0; v < V; ++v)
      c.s.push_back(fs[face_of(v)]);
    for (long code = 0; code < (1L << bits); ++code) {
      c.h.assign(q.arrows.size(), 1);
      for (size_t i = 0; i < E.size(); ++i)
        if ((code >> i) & 1) {
          c.h[E[i]] = -1;
          c.h[q.partner_arrow(E[i])] = -1;
        }
      for (int a = 0; a < N3; ++a)
        if ((code >> (E.size() + a)) & 1)
          c.h[a] = -1;
      if (!in_Z(q, n, c))
        continue;
      std::vector<int> eps(V, 0);
      eps[0] = 1;
      for (int a : tree) {
        int u = q.arrows[a].from, v = q.arrows[a].to;
        if (eps[u] && !eps[v])
          eps[v] = eps[u] * c.h[a];
        else if (eps[v] && !eps[u])
          eps[u] = eps[v] * c.h[a];
      }
      auto r = act_FZ(q, c, eps);
      std::vector<int> key = fs;
      key.insert(key.end(), r.h.begin(), r.h.end());
      reps.insert(key);
    }
  }
  return (long long)reps.size();
}

// ---------------------------------------------------------------- retraction

XPlus retraction_path(const Quiver &q, const XPlus &z, double t, RetractTarget target,
                      const Ctx &ctx) {
  require_xplus(q, z, false, ctx);
  if (t < 0 || t > 1)
    throw PreconditionError("retraction_path: t must lie in [0,1]");
  XPlus o = z;
  int n = z.n;
  for (size_t a = q.T.slots(); a < q.arrows.size(); ++a) {
    Mat L = sym_log(z.x[a], ctx);
    if (target == RetractTarget::Identity) {
      o.x[a] = sym_exp(t * L);
    } else {
      double c = L.trace() / n;
      o.x[a] = sym_exp(c * eye(n) + t * (L - c * eye(n)));
    }
  }
  return o;
}

// ---------------------------------------------------------------- Sp(4)

Sp4Class sp4_classify(const Quiver &q, const SpanningData &sd, const XPlus &z,
                      const Ctx &ctx) {
  if (z.n != 2)
    throw PreconditionError("sp4_classify: needs n = 2");
  require_xplus(q, z, false, ctx);
  double tol = std::sqrt(ctx.tol);
  for (int a : sd.S)
    if ((z.x[a] - eye(2)).norm() > tol)
      throw PreconditionError("sp4_classify: coordinates are not normalized on the tree");
  Sp4Class c;
  for (int a : sd.E) {
    Mat L = sym_log(z.x[a], ctx);
    c.t.push_back(L.trace() / 2);
    c.z.push_back(cplx(0.5 * (L(0, 0) - L(1, 1)), 0.5 * (L(0, 1) + L(1, 0))));
  }
  for (int a : sd.R)
    c.r.push_back(z.x[a]);
  auto is_pm_id = [&](const Mat &r) {
    return (r - eye(2)).norm() <= tol || (r + eye(2)).norm() <= tol;
  };
  auto is_rot = [](const Mat &r) { return r.determinant() > 0; };
  bool all_z0 = std::all_of(c.z.begin(), c.z.end(), [&](cplx x) { return std::abs(x) <= tol; });
  bool all_pm = std::all_of(c.r.begin(), c.r.end(), is_pm_id);
  bool all_rot = std::all_of(c.r.begin(), c.r.end(), is_rot);
  if (all_z0 && all_pm) {
    c.stabilizer = "O2";
    c.membership = "SL2";
    return c;
  }
  if (all_z0 && all_rot) {
    c.stabilizer = "SO2";
    c.membership = "SL2xSO2";
    return c;
  }
  // candidate θ from a nonzero z, else from a reflection
  std::optional<double> theta;
  for (auto x : c.z)
    if (std::abs(x) > tol) {
      theta = std::arg(x);
      break;
    }
  if (!theta)
    for (auto &r : c.r)
      if (!is_rot(r)) {
        theta = std::atan2(r(0, 1), r(0, 0));
        break;
      }
  const double pi = std::acos(-1.0);
  if (theta) {
    double th = *theta;
    Mat refl(2, 2);
    refl << std::cos(th), std::sin(th), std::sin(th), -std::cos(th);
    bool ok = true;
    for (auto x : c.z) {
      // x ∈ ℝ·e^{iθ}
      double im = std::imag(x * std::exp(cplx(0, -th)));
      ok = ok && std::abs(im) <= tol;
    }
    for (auto &r : c.r)
      ok = ok && (is_pm_id(r) || (r - refl).norm() <= tol || (r + refl).norm() <= tol);
    if (ok) {
      c.stabilizer = "G_theta";
      c.membership = "SL2xSL2";
      c.theta = std::fmod(std::fmod(th, pi) + pi, pi);
      return c;
    }
  }
  c.stabilizer = "pm_Id";
  c.membership = "generic";
  return c;
}

// ---------------------------------------------------------------- pieces

int piece_dimension_formula(const Quiver &q, const XE &x) {
  int d = 0;
  for (int a : default_E(q))
    d += cone_dimension(x.en[a].dn);
  return d + q.T.faces() * x.n * (x.n - 1);
}

int piece_dimension_numeric(const Quiver &q, const XE &x, const Ctx &ctx) {
  int n = x.n, d = 0;
  for (int a : default_E(q))
    d += cone_dimension(x.en[a].dn);
  int m = 3 * n * n;
  for (int f = 0; f < q.T.faces(); ++f) {
    auto fa = face_arrows(q, f);
    auto rel = [&](const std::array<Mat, 3> &Y) {
      Vec out(m);
      for (int k = 0; k < 3; ++k) {
        Mat r = Y[(k + 2) % 3] * Y[(k + 1) % 3].inverse().transpose() * Y[k] - x.S[fa.w[k]];
        out.segment(k * n * n, n * n) = Eigen::Map<Vec>(r.data(), n * n);
      }
      return out;
    };
    std::array<Mat, 3> Y0{x.Y[fa.c[0]], x.Y[fa.c[1]], x.Y[fa.c[2]]};
    Mat Jac(m, m);
    const double h = 1e-6;
    for (int j = 0; j < m; ++j) {
      auto Yp = Y0, Ym = Y0;
      int k = j / (n * n), idx = j % (n * n);
      Yp[k].data()[idx] += h;
      Ym[k].data()[idx] -= h;
      Jac.col(j) = (rel(Yp) - rel(Ym)) / (2 * h);
    }
    Eigen::JacobiSVD<Mat> svd(Jac);
    Vec sv = svd.singularValues();
    double thr = 1e-6 * std::max(1.0, sv(0));
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      rank += sv(i) > thr;
    d += m - rank;
  }
  (void)ctx;
  return d;
}

} // namespace symp
