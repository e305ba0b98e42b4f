#include "symp/acoords.hpp"
#include "symp/invariants.hpp"

#include <algorithm>
#include <cmath>

namespace symp {

namespace {

Mat eye(int n) { return Mat::Identity(n, n); }

int sl(int f, int k) { return 3 * f + ((k % 3) + 3) % 3; }

Mat antisym_part(const Mat &m) { return 0.5 * (m - m.transpose()); }

} // namespace

AResiduals check_acoords(const Triangulation &T, const ACoords &A) {
  if (int(A.H.size()) != T.slots())
    throw PreconditionError("A-coordinates: one matrix per slot expected");
  AResiduals r;
  for (int v = 0; v < T.slots(); ++v) {
    if (A.H[v].rows() != A.n || A.H[v].cols() != A.n)
      throw PreconditionError("A-coordinates: matrix of wrong size");
    if (!T.external(v))
      r.transpose = std::max(r.transpose, rel_err(A.H[T.partner[v]], A.H[v].transpose()));
  }
  for (int f = 0; f < T.faces(); ++f) {
    Mat P;
    try {
      P = face_product(A, f);
    } catch (const PreconditionError &) {
      r.face = std::max(r.face, 1.0);
      continue;
    }
    r.face = std::max(r.face, antisym_part(P).norm() / std::max(1.0, P.norm()));
  }
  return r;
}

Mat arc_value(const Triangulation &T, const ACoords &A, int x, int y) {
  // α_v runs t(v) → b(v)
  int v = find_side(T, y, x);
  if (v >= 0)
    return A.H[v];
  v = find_side(T, x, y);
  if (v >= 0)
    return A.H[v].transpose();
  throw PreconditionError("arc_value: not an edge of the triangulation");
}

Mat face_product(const ACoords &A, int f, const Ctx &ctx) {
  const Mat &h0 = A.H[sl(f, 0)], &h1 = A.H[sl(f, 1)], &h2 = A.H[sl(f, 2)];
  return h0.transpose() * inv_checked(h1, "A-coordinates: singular value", ctx) *
         h2.transpose();
}

bool is_maximal_acoords(const Triangulation &T, const ACoords &A, const Ctx &ctx) {
  for (auto &h : A.H)
    if (!Eigen::FullPivLU<Mat>(h).isInvertible())
      return false;
  for (int f = 0; f < T.faces(); ++f) {
    Mat P = face_product(A, f, ctx);
    if (antisym_part(P).norm() > std::sqrt(ctx.tol) * std::max(1.0, P.norm()))
      return false;
    if (!is_pos_def(symmetrize(P), ctx.tol * std::max(1.0, P.norm())))
      return false;
  }
  return true;
}

Decorated reconstruct_system(const Triangulation &T, const ACoords &A, const Ctx &ctx) {
  auto r = check_acoords(T, A);
  if (!(r.max() <= std::sqrt(ctx.tol)))
    throw PreconditionError("A-coordinates violate their relations (residual " +
                            std::to_string(r.max()) + ")");
  int n = A.n, V = T.slots();
  Decorated d;
  d.sys.q = build_quiver(T);
  d.sys.n = n;
  const auto &q = d.sys.q;
  std::vector<Mat> Hi(V), D(V), Di(V);
  for (int v = 0; v < V; ++v) {
    Hi[v] = inv_checked(A.H[v], "reconstruct: singular A-coordinate", ctx);
    D[v] = diag2(eye(n), A.H[v]);
    Di[v] = diag2(eye(n), Hi[v]);
    Mat ft = Mat::Zero(2 * n, n), fb = Mat::Zero(2 * n, n);
    ft.topRows(n) = eye(n);
    fb.bottomRows(n) = A.H[v];
    d.Ft.push_back(ft);
    d.Fb.push_back(fb);
  }
  Mat Z = Mat::Zero(n, n);
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    auto &x = q.arrows[a];
    Mat g;
    if (x.kind == ArrowKind::A2) {
      g = blocks(Z, eye(n), -eye(n), Z);
    } else {
      // 3-cycle (a, b, c) with sources (f,s), (f,s+2), (f,s+1)
      int f = x.from / 3, s = x.from % 3;
      const Mat &Ha = A.H[sl(f, s)], &Hc = A.H[sl(f, s + 1)];
      const Mat &Hbi = Hi[sl(f, s + 2)];
      g = blocks(Hbi.transpose() * Hc, eye(n), -Hbi * Ha.transpose(), Z);
    }
    d.sys.G.push_back(D[x.to] * g * Di[x.from]);
  }
  return d;
}

double decoration_residual(const Decorated &d) {
  int n = d.sys.n;
  Mat Jn = J(n);
  double r = 0;
  for (size_t v = 0; v < d.Ft.size(); ++v) {
    r = std::max(r, (d.Ft[v].transpose() * Jn * d.Ft[v]).norm());
    r = std::max(r, (d.Fb[v].transpose() * Jn * d.Fb[v]).norm());
  }
  for (size_t a = 0; a < d.sys.q.arrows.size(); ++a) {
    auto &x = d.sys.q.arrows[a];
    r = std::max(r, rel_err(d.sys.G[a] * d.Fb[x.from], d.Ft[x.to]));
  }
  return r;
}

ACoords lambda_of_system(const Decorated &d) {
  ACoords A;
  A.n = d.sys.n;
  Mat Jn = J(A.n);
  for (size_t v = 0; v < d.Ft.size(); ++v)
    A.H.push_back(d.Ft[v].transpose() * Jn * d.Fb[v]);
  return A;
}

ACoords flip_acoords(const Triangulation &T, const ACoords &A, int slot, const Ctx &ctx) {
  if (slot < 0 || slot >= T.slots() || T.external(slot))
    throw PreconditionError("flip_acoords: not an interior edge");
  int f = slot / 3, s = slot % 3, w = T.partner[slot], f2 = w / 3, s2 = w % 3;
  auto U = flip(T, slot);
  auto m = flip_slot_map(T, slot);
  const auto &H = A.H;
  auto inv = [&](const Mat &x) { return inv_checked(x, "flip_acoords: singular value", ctx); };
  // quadrilateral R, P, S, Q; old diagonal P–Q, new diagonal R→S
  Mat g = H[sl(f, s + 2)].transpose() * inv(H[sl(f, s)]) * H[sl(f2, s2 + 2)] +
          H[sl(f, s + 1)] * inv(H[sl(f, s)].transpose()) * H[sl(f2, s2 + 1)].transpose();
  if (!Eigen::FullPivLU<Mat>(g).isInvertible() ||
      Eigen::JacobiSVD<Mat>(g).singularValues().minCoeff() <=
          ctx.tol * std::max(1.0, g.norm()))
    throw NumericalError("flip_acoords: non-transverse after flip");
  ACoords out;
  out.n = A.n;
  out.H.assign(U.slots(), Mat());
  for (int u = 0; u < T.slots(); ++u)
    if (u != slot && u != w)
      out.H[m[u]] = H[u];
  out.H[3 * f + 2] = g;
  out.H[3 * f2 + 2] = g.transpose();
  return out;
}

ACoords rand_acoords(const Triangulation &T, int n, Rng &rng, double spread) {
  auto edges = T.edges();
  int E = int(edges.size()), N = E * n * n;
  ACoords A;
  A.n = n;
  A.H.assign(T.slots(), eye(n));
  auto unpack = [&](const Vec &x) {
    for (int e = 0; e < E; ++e) {
      Mat h = Eigen::Map<const Mat>(x.data() + e * n * n, n, n);
      A.H[edges[e]] = h;
      if (!T.external(edges[e]))
        A.H[T.partner[edges[e]]] = h.transpose();
    }
  };
  Vec x(N);
  for (int e = 0; e < E; ++e) {
    Mat h = eye(n) + spread * rand_mat(rng, n, n);
    Eigen::Map<Mat>(x.data() + e * n * n, n, n) = h;
  }
  int m = T.faces() * n * (n - 1) / 2;
  if (m == 0) {
    unpack(x);
    return A;
  }
  auto residual = [&](const Vec &y) {
    unpack(y);
    Vec r(m);
    int k = 0;
    for (int f = 0; f < T.faces(); ++f) {
      Mat P = face_product(A, f);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          r(k++) = P(i, j) - P(j, i);
    }
    return r;
  };
  for (int it = 0; it < 60; ++it) {
    Vec r = residual(x);
    if (r.norm() < 1e-14)
      break;
    Mat Jac(m, N);
    const double h = 1e-7;
    for (int j = 0; j < N; ++j) {
      Vec xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      Jac.col(j) = (residual(xp) - residual(xm)) / (2 * h);
    }
    x -= Jac.completeOrthogonalDecomposition().solve(r);
  }
  Vec r = residual(x);
  if (r.norm() > 1e-10)
    throw NumericalError("rand_acoords: projection did not converge");
  unpack(x);
  return A;
}

// ---------------------------------------------------------------- geometry

Mat geometric_arc(const Triangulation &T, const std::vector<Mat> &v, int i, int j) {
  auto pos = polygon_order(T);
  Mat L = lambda_length(v[i], v[j]);
  return pos[i] < pos[j] ? L : Mat(-L);
}

ACoords acoords_from_config(const Triangulation &T, const std::vector<Mat> &v) {
  ACoords A;
  A.n = int(v[0].cols());
  for (int s = 0; s < T.slots(); ++s)
    A.H.push_back(geometric_arc(T, v, T.t(s), T.b(s)));
  return A;
}

std::vector<Mat> rand_maximal_config(Rng &rng, int p, int n) {
  Mat g = rand_sp(rng, n);
  Mat S = rand_sym(rng, n);
  std::vector<Mat> v;
  for (int k = 0; k < p; ++k) {
    if (k)
      S += rand_spd(rng, n);
    Mat b(2 * n, n);
    b << eye(n), S;
    v.push_back(g * b * rand_gl(rng, n, 8.0));
  }
  return v;
}

Mat cross_ratio_of_arc(const Mat &v1, const Mat &v2, const Mat &v3, const Mat &v4,
                       const Ctx &ctx) {
  return cross_ratio_via_lambda(v1, v2, v3, v4, ctx);
}

double CRFlipReport::max() const { return std::max({r84, r64, r82, r68, r42}); }

CRFlipReport verify_cross_ratio_flip(const std::vector<Mat> &v, const Ctx &ctx) {
  if (v.size() != 8)
    throw PreconditionError("verify_cross_ratio_flip: eight decorated Lagrangians expected");
  auto V = [&](int i) -> const Mat & { return v[i - 1]; };
  auto L = [&](int i, int j) { return lambda_length(V(i), V(j)); };
  // cross ratio of the arc i→j with side vertices a (increasing side) and b
  auto CR = [&](int i, int a, int j, int b) {
    return cross_ratio_via_lambda(V(i), V(a), V(j), V(b), ctx);
  };
  auto inv = [&](const Mat &m) {
    return inv_checked(m, "verify_cross_ratio_flip: singular factor", ctx);
  };
  int n = int(v[0].cols());
  Mat I = eye(n);
  // triangulation with 62
  Mat c82 = CR(8, 1, 2, 6), c68 = CR(6, 7, 8, 2), c64 = CR(6, 2, 4, 5),
      c42 = CR(4, 6, 2, 3), c62 = CR(6, 8, 2, 4);
  // triangulation with 84
  Mat d82 = CR(8, 1, 2, 4), d68 = CR(6, 7, 8, 4), d64 = CR(6, 8, 4, 5),
      d42 = CR(4, 8, 2, 3), d84 = CR(8, 2, 4, 6);
  Mat L68 = L(6, 8), L64 = L(6, 4);
  Mat c62i = inv(c62);
  Mat t = inv(L68) * c62i.transpose() * L68;
  CRFlipReport r;
  r.r84 = rel_err(t, d84);
  if (!Eigen::FullPivLU<Mat>(I + c62i).isInvertible())
    throw NumericalError("verify_cross_ratio_flip: Id + CR⁻¹ singular");
  r.r64 = rel_err(c64 * inv(I + c62i), d64);
  r.r82 = rel_err(inv(I + t) * c82, d82);
  r.r68 = rel_err((I + c62) * c68, d68);
  r.r42 = rel_err(c42 * (I + inv(L64) * c62.transpose() * L64), d42);
  // the forms without the inverse on 82 and without the transpose on 42
  r.alt82 = rel_err((I + t) * c82, d82);
  r.alt42 = rel_err(c42 * (I + inv(L64) * c62 * L64), d42);
  return r;
}

Mat laurent_expand(const Triangulation &T, const ACoords &A, int i, int j, const Ctx &ctx) {
  auto seqs = enumerate_zigzag(T, i, j);
  if (seqs.empty())
    throw PreconditionError("laurent_expand: no zigzag sequence");
  Mat sum = Mat::Zero(A.n, A.n);
  for (auto &p : seqs) {
    Mat term = arc_value(T, A, p[0], p[1]);
    for (size_t l = 2; l + 1 < p.size(); l += 2) {
      // δ_l = p[l-1]→p[l], used reversed and inverted
      term = term * inv_checked(arc_value(T, A, p[l], p[l - 1]),
                                "laurent_expand: singular factor", ctx) *
             arc_value(T, A, p[l], p[l + 1]);
    }
    sum += term;
  }
  return sum;
}

} // namespace symp
