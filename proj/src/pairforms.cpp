#include "symp/pairforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace symp {

template <class S> using MatS = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S> using VecS = Eigen::Matrix<S, Eigen::Dynamic, 1>;

int DNData::n() const {
  int s = 0;
  for (auto &f : fam)
    for (int x : f)
      s += x;
  for (int x : m2)
    s += x;
  return s;
}

DNData iota(const DNData &d) {
  DNData o = d;
  std::swap(o.fam[1], o.fam[2]);
  return o;
}

ENData iota(const ENData &e) {
  ENData o = e;
  o.dn = iota(e.dn);
  std::swap(o.lam[1], o.lam[2]);
  return o;
}

static bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// a before b in decreasing order; ties resolved by size
static bool real_before(double la, int na, double lb, int nb) {
  if (!near(la, lb, 1e-7))
    return la > lb;
  return na > nb;
}

static bool cplx_before(cplx a, int na, cplx b, int nb) {
  if (!near(a.real(), b.real(), 1e-7))
    return a.real() > b.real();
  if (!near(a.imag(), b.imag(), 1e-7))
    return a.imag() > b.imag();
  return na > nb;
}

void validate(const ENData &e, double tol) {
  auto fail = [](const std::string &s) { throw PreconditionError("ENData: " + s); };
  for (int x = 0; x < 4; ++x) {
    auto &ns = e.dn.fam[x];
    auto &ls = e.lam[x];
    if (ns.size() != ls.size())
      fail("length mismatch");
    for (size_t j = 0; j < ns.size(); ++j) {
      if (ns[j] < 1)
        fail("block size < 1");
      if (!(fam_eps(x) * fam_eta(x) * ls[j] > 0))
        fail("sign rule violated");
      if (j + 1 < ns.size()) {
        if (ls[j + 1] > ls[j] + tol)
          fail("eigenvalues not decreasing");
        if (std::abs(ls[j + 1] - ls[j]) <= tol && ns[j + 1] > ns[j])
          fail("sizes not nonincreasing on ties");
      }
    }
  }
  if (e.dn.m2.size() != e.lamC.size())
    fail("complex length mismatch");
  for (size_t j = 0; j < e.lamC.size(); ++j) {
    if (e.dn.m2[j] < 2 || e.dn.m2[j] % 2)
      fail("complex block size not positive even");
    if (!(e.lamC[j].imag() > 0))
      fail("complex eigenvalue not in upper half plane");
    if (j + 1 < e.lamC.size()) {
      cplx a = e.lamC[j], b = e.lamC[j + 1];
      bool tie = std::abs(a - b) <= tol;
      if (!tie && !(a.real() > b.real() + tol ||
                    (std::abs(a.real() - b.real()) <= tol && a.imag() > b.imag())))
        fail("complex eigenvalues not decreasing");
      if (tie && e.dn.m2[j + 1] > e.dn.m2[j])
        fail("complex sizes not nonincreasing on ties");
    }
  }
}

void sort_en(ENData &e) {
  for (int x = 0; x < 4; ++x) {
    auto &ns = e.dn.fam[x];
    auto &ls = e.lam[x];
    std::vector<int> idx(ns.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return real_before(ls[a], ns[a], ls[b], ns[b]);
    });
    std::vector<int> n2;
    std::vector<double> l2;
    for (int i : idx) {
      n2.push_back(ns[i]);
      l2.push_back(ls[i]);
    }
    ns = n2;
    ls = l2;
  }
  std::vector<int> idx(e.lamC.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return cplx_before(e.lamC[a], e.dn.m2[a], e.lamC[b], e.dn.m2[b]);
  });
  std::vector<int> m2;
  std::vector<cplx> lc;
  for (int i : idx) {
    m2.push_back(e.dn.m2[i]);
    lc.push_back(e.lamC[i]);
  }
  e.dn.m2 = m2;
  e.lamC = lc;
}

bool en_close(const ENData &a, const ENData &b, double tol) {
  if (!(a.dn == b.dn))
    return false;
  for (int x = 0; x < 4; ++x)
    for (size_t j = 0; j < a.lam[x].size(); ++j)
      if (!near(a.lam[x][j], b.lam[x][j], tol))
        return false;
  for (size_t j = 0; j < a.lamC.size(); ++j)
    if (std::abs(a.lamC[j] - b.lamC[j]) > tol * std::max(1.0, std::abs(a.lamC[j])))
      return false;
  return true;
}

std::string to_string(const ENData &e) {
  static const char *names[4] = {"(1,1)", "(1,-1)", "(-1,1)", "(-1,-1)"};
  std::ostringstream os;
  for (int x = 0; x < 4; ++x) {
    os << names[x] << ":";
    for (size_t j = 0; j < e.dn.fam[x].size(); ++j)
      os << " " << e.dn.fam[x][j] << "@" << e.lam[x][j];
    os << "; ";
  }
  os << "C:";
  for (size_t j = 0; j < e.dn.m2.size(); ++j)
    os << " " << e.dn.m2[j] << "@" << e.lamC[j].real() << "+" << e.lamC[j].imag() << "i";
  return os.str();
}

// ---- blocks

static Mat Cn(int n) {
  Mat c = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    c(i, n - 1 - i) = 1;
  return c;
}

template <class S> static MatS<S> Jn(int n, S lam) {
  MatS<S> j = MatS<S>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    j(i, i) = lam;
    if (i + 1 < n)
      j(i, i + 1) = 1;
  }
  return j;
}

// root · C_n · Σ a_ℓ λ^{-ℓ} N^ℓ with a_ℓ the coefficients of (1+t)^{1/2}
template <class S> static MatS<S> back_series(int n, S lam, S root) {
  MatS<S> N = Jn<S>(n, S(0));
  MatS<S> acc = MatS<S>::Zero(n, n), pw = MatS<S>::Identity(n, n);
  double a = 1;
  S li = S(1);
  for (int l = 0; l < n; ++l) {
    acc += (a * li) * pw;
    pw = pw * N;
    li /= lam;
    a *= (0.5 - l) / (l + 1);
  }
  return root * Cn(n).cast<S>() * acc;
}

Mat s_of(const CMat &m) {
  Mat o(2 * m.rows(), 2 * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double x = m(i, j).real(), y = m(i, j).imag();
      o.block<2, 2>(2 * i, 2 * j) << x, -y, -y, -x;
    }
  return o;
}

Mat r_of(const CMat &m) {
  Mat o(2 * m.rows(), 2 * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double x = m(i, j).real(), y = m(i, j).imag();
      o.block<2, 2>(2 * i, 2 * j) << x, -y, y, x;
    }
  return o;
}

Mat build_block(BlockKind kind, int size, cplx lambda) {
  if (size < 1)
    throw PreconditionError("build_block: size < 1");
  bool primed = kind == BlockKind::Cp || kind == BlockKind::Jp || kind == BlockKind::Psi;
  if (primed && size % 2)
    throw PreconditionError("build_block: primed blocks need even size");
  switch (kind) {
  case BlockKind::C:
    return Cn(size);
  case BlockKind::J:
    return Jn<double>(size, lambda.real());
  case BlockKind::Cp:
    return s_of(Cn(size / 2).cast<cplx>());
  case BlockKind::Jp:
    return r_of(Jn<cplx>(size / 2, lambda));
  case BlockKind::Phi: {
    double l = lambda.real();
    if (l == 0)
      throw PreconditionError("build_block: back transformation needs lambda != 0");
    return back_series<double>(size, l, std::sqrt(std::abs(l)));
  }
  case BlockKind::Psi: {
    if (lambda == 0.0)
      throw PreconditionError("build_block: back transformation needs lambda != 0");
    // principal root: the largest one in lexicographic order
    cplx root = std::sqrt(lambda);
    if (root.real() < 0 || (root.real() == 0 && root.imag() < 0))
      root = -root;
    return s_of(back_series<cplx>(size / 2, lambda, root));
  }
  }
  return {};
}

static void put(Mat &m, int r, int c, const Mat &b) {
  m.block(r, c, b.rows(), b.cols()) = b;
}

Assembled assemble(const ENData &e, bool with_phi) {
  int n = e.dn.n();
  Assembled a;
  a.C = Mat::Zero(n, n);
  a.J = Mat::Zero(n, n);
  std::array<int, 5> off{}, sz{};
  int o = 0;
  for (int x = 0; x < 4; ++x) {
    off[x] = o;
    for (size_t j = 0; j < e.dn.fam[x].size(); ++j) {
      int k = e.dn.fam[x][j];
      put(a.C, o, o, fam_eps(x) * Cn(k));
      put(a.J, o, o, Jn<double>(k, e.lam[x][j]));
      o += k;
    }
    sz[x] = o - off[x];
  }
  off[4] = o;
  for (size_t j = 0; j < e.dn.m2.size(); ++j) {
    int k = e.dn.m2[j];
    put(a.C, o, o, build_block(BlockKind::Cp, k));
    put(a.J, o, o, build_block(BlockKind::Jp, k, e.lamC[j]));
    o += k;
  }
  sz[4] = o - off[4];
  a.D = a.C * a.J;
  if (!with_phi)
    return a;
  a.Phi = Mat::Zero(n, n);
  // column offsets in the ι layout: families 1 and 2 trade places
  std::array<int, 5> coff = off;
  coff[1] = off[0] + sz[0];
  coff[2] = coff[1] + sz[2];
  for (int x = 0; x < 4; ++x) {
    int cx = x == 1 ? 2 : (x == 2 ? 1 : x);
    int r = off[x], c = coff[cx];
    for (size_t j = 0; j < e.dn.fam[x].size(); ++j) {
      int k = e.dn.fam[x][j];
      put(a.Phi, r, c, build_block(BlockKind::Phi, k, e.lam[x][j]));
      r += k;
      c += k;
    }
  }
  o = off[4];
  for (size_t j = 0; j < e.dn.m2.size(); ++j) {
    int k = e.dn.m2[j];
    put(a.Phi, o, o, build_block(BlockKind::Psi, k, e.lamC[j]));
    o += k;
  }
  return a;
}

// ---- classification

namespace {

template <class S> struct Chain {
  int eps;
  int m;
  MatS<S> W; // columns e_1..e_m of the Jordan chain, e_m cyclic
};

template <class S> double re_abs(S x) { return std::abs(x); }

template <class S> S sqrt_s(S x);
template <> double sqrt_s<double>(double x) { return std::sqrt(x); }
template <> cplx sqrt_s<cplx>(cplx x) { return std::sqrt(x); }

// Splits a nilpotent N, self-adjoint for the symmetric bilinear B, into
// orthogonal Jordan chains on which B is ±C_m (always +C_m over ℂ).
template <class S>
std::vector<Chain<S>> extract_chains(MatS<S> N, MatS<S> B, double scale,
                                     const Ctx &ctx) {
  constexpr bool is_cplx = !std::is_same_v<S, double>;
  int k0 = int(N.rows());
  MatS<S> cur = MatS<S>::Identity(k0, k0);
  std::vector<Chain<S>> out;
  Rng rng(20240917);
  std::normal_distribution<double> nd;
  auto thr = [&](int j) { return 10 * ctx.tol * std::pow(std::max(1.0, scale), j); };
  while (N.rows() > 0) {
    int k = int(N.rows());
    std::vector<MatS<S>> pw{MatS<S>::Identity(k, k)};
    int m = 0;
    while (m < k) {
      pw.push_back(pw.back() * N);
      ++m;
      if (pw.back().norm() <= thr(m))
        break;
    }
    if (pw.back().norm() > 1e3 * thr(m))
      throw NumericalError("classify_pair: unstable classification (cluster is not nilpotent)");
    MatS<S> BN = B * pw[m - 1];
    // cyclic vector: coordinate vectors first, then fixed pseudo-random ones
    VecS<S> w = VecS<S>::Zero(k);
    double best = -1;
    for (int i = 0; i < k; ++i)
      if (re_abs(BN(i, i)) > best) {
        best = re_abs(BN(i, i));
        w.setZero();
        w(i) = 1;
      }
    for (int t = 0; t < 16; ++t) {
      VecS<S> c(k);
      for (int i = 0; i < k; ++i) {
        if constexpr (is_cplx)
          c(i) = cplx(nd(rng), nd(rng));
        else
          c(i) = nd(rng);
      }
      c /= c.norm();
      double v = re_abs(S((c.transpose() * BN * c)(0, 0)));
      if (v > 1.5 * best) {
        best = v;
        w = c;
      }
    }
    if (best <= thr(m))
      throw NumericalError("classify_pair: unstable classification (no cyclic vector)");
    // z = Σ b_{m-1-i}(w,w) X^i in K[X]/X^m
    std::vector<S> z(m);
    for (int i = 0; i < m; ++i)
      z[i] = (w.transpose() * B * pw[m - 1 - i] * w)(0, 0);
    int eps = 1;
    if constexpr (!is_cplx)
      eps = z[0] > 0 ? 1 : -1;
    S c0 = S(double(eps)) * z[0];
    // (1+t)^{-1/2} with t = z/z0 - 1
    std::vector<S> t(m, S(0)), g(m, S(0)), tp(m, S(0));
    for (int i = 1; i < m; ++i)
      t[i] = z[i] / z[0];
    tp[0] = 1;
    double b = 1;
    for (int l = 0; l < m; ++l) {
      for (int i = 0; i < m; ++i)
        g[i] += b * tp[i];
      std::vector<S> nx(m, S(0));
      for (int i = 0; i < m; ++i)
        for (int j = 0; i + j < m; ++j)
          nx[i + j] += tp[i] * t[j];
      tp = nx;
      b *= (-0.5 - l) / (l + 1);
    }
    S r = S(1) / sqrt_s<S>(c0);
    VecS<S> v = VecS<S>::Zero(k);
    for (int i = 0; i < m; ++i)
      v += (r * g[i]) * (pw[i] * w);
    MatS<S> W(k, m);
    for (int i = 1; i <= m; ++i)
      W.col(i - 1) = pw[m - i] * v;
    out.push_back({eps, m, cur * W});
    if (m == k)
      break;
    // B-orthogonal complement, which N preserves
    MatS<S> A = W.transpose() * B;
    Eigen::HouseholderQR<MatS<S>> qr(A.adjoint());
    MatS<S> Q = qr.householderQ() * MatS<S>::Identity(k, k);
    MatS<S> Qc = Q.rightCols(k - m);
    N = Qc.adjoint() * N * Qc;
    B = Qc.transpose() * B * Qc;
    cur = cur * Qc;
  }
  return out;
}

struct RealBlock {
  int fam;
  int m;
  double lam;
  Mat cols;
};
struct CplxBlock {
  int m2;
  cplx lam;
  Mat cols;
};

} // namespace

PairNormalForm classify_pair(const Mat &b0, const Mat &b1, const Ctx &ctx) {
  int n = int(b0.rows());
  if (n == 0 || b0.cols() != n || b1.rows() != n || b1.cols() != n)
    throw PreconditionError("classify_pair: need two square matrices of equal size");
  for (const Mat *b : {&b0, &b1})
    if ((*b - b->transpose()).norm() > std::sqrt(ctx.tol) * std::max(1.0, b->norm()))
      throw PreconditionError("classify_pair: input not symmetric");
  Mat s0 = symmetrize(b0), s1 = symmetrize(b1);
  Eigen::JacobiSVD<Mat> sv(s0);
  if (sv.singularValues()(n - 1) <= ctx.tol * std::max(1.0, sv.singularValues()(0)))
    throw PreconditionError("classify_pair: b0 is degenerate");
  Mat F = s0.fullPivLu().solve(s1);
  CVec ev = Eigen::EigenSolver<Mat>(F, false).eigenvalues();
  double rho = ev.cwiseAbs().maxCoeff();
  if (rho <= ctx.tol)
    throw PreconditionError("classify_pair: b1 is degenerate (zero eigenvalue)");
  double fscale = std::max(1.0, F.norm());
  CMat Fc = F.cast<cplx>();

  // nullity of (F - μ)^k is k: 1 yes, 0 no, -1 undecidable
  auto nullity = [&](cplx mu, int k) {
    CMat M = CMat::Identity(n, n);
    CMat A = Fc - mu * CMat::Identity(n, n);
    for (int i = 0; i < k; ++i)
      M = M * A;
    Eigen::JacobiSVD<CMat> s(M);
    double sig = s.singularValues()(n - k);
    double thr = 10 * ctx.tol * std::pow(fscale, k);
    return sig <= thr ? 1 : (sig <= 1e3 * thr ? -1 : 0);
  };

  std::vector<std::vector<int>> cl;
  {
    std::vector<int> par(n);
    std::iota(par.begin(), par.end(), 0);
    std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(ev(i) - ev(j)) <= ctx.cluster_tol * rho)
          par[find(i)] = find(j);
    std::map<int, std::vector<int>> g;
    for (int i = 0; i < n; ++i)
      g[find(i)].push_back(i);
    for (auto &[k, v] : g)
      cl.push_back(v);
  }
  auto mean = [&](const std::vector<int> &c) {
    cplx s = 0;
    for (int i : c)
      s += ev(i);
    return s / double(c.size());
  };
  // split Jordan blocks scatter their eigenvalues: merge clusters whenever
  // the union still has full nullity
  std::set<std::pair<int, int>> rejected;
  auto key = [](const std::vector<int> &c) { return *std::min_element(c.begin(), c.end()); };
  while (true) {
    double bd = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (size_t i = 0; i < cl.size(); ++i)
      for (size_t j = i + 1; j < cl.size(); ++j) {
        if (rejected.count({key(cl[i]), key(cl[j])}))
          continue;
        double d = std::abs(mean(cl[i]) - mean(cl[j]));
        if (d < bd && d <= 0.05 * rho) {
          bd = d;
          bi = int(i);
          bj = int(j);
        }
      }
    if (bi < 0)
      break;
    std::vector<int> u = cl[bi];
    u.insert(u.end(), cl[bj].begin(), cl[bj].end());
    int r = nullity(mean(u), int(u.size()));
    if (r < 0)
      throw NumericalError("classify_pair: unstable classification (ambiguous eigenvalue cluster)");
    if (r == 1) {
      cl[bi] = u;
      cl.erase(cl.begin() + bj);
    } else {
      rejected.insert({key(cl[bi]), key(cl[bj])});
    }
  }

  PairNormalForm nf;
  nf.margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cl.size(); ++i)
    for (size_t j = i + 1; j < cl.size(); ++j)
      nf.margin = std::min(nf.margin, std::abs(mean(cl[i]) - mean(cl[j])) / rho);

  std::vector<RealBlock> rb;
  std::vector<CplxBlock> cb;
  double imtol = ctx.cluster_tol * rho;
  int lower = 0, upper = 0;
  for (auto &c : cl) {
    cplx mu = mean(c);
    int k = int(c.size());
    if (nullity(mu, k) != 1)
      throw NumericalError("classify_pair: unstable classification (cluster nullity)");
    if (std::abs(mu.imag()) <= imtol) {
      double l = mu.real();
      if (std::abs(l) <= ctx.cluster_tol * rho)
        throw PreconditionError("classify_pair: b1 is degenerate (zero eigenvalue)");
      Mat M = Mat::Identity(n, n), A = F - l * Mat::Identity(n, n);
      for (int i = 0; i < k; ++i)
        M = M * A;
      Eigen::JacobiSVD<Mat> s(M, Eigen::ComputeFullV);
      Mat U = s.matrixV().rightCols(k);
      Mat N = U.transpose() * F * U - l * Mat::Identity(k, k);
      Mat Br = U.transpose() * s0 * U;
      for (auto &ch : extract_chains<double>(N, Br, fscale, ctx)) {
        int eta = ch.eps * l > 0 ? 1 : -1;
        rb.push_back({fam_index(ch.eps, eta), ch.m, l, U * ch.W});
      }
    } else if (mu.imag() < 0) {
      lower += k;
    } else {
      upper += k;
      CMat M = CMat::Identity(n, n), A = Fc - mu * CMat::Identity(n, n);
      for (int i = 0; i < k; ++i)
        M = M * A;
      Eigen::JacobiSVD<CMat> s(M, Eigen::ComputeFullV);
      CMat U = s.matrixV().rightCols(k);
      CMat N = U.adjoint() * Fc * U - mu * CMat::Identity(k, k);
      CMat Br = U.transpose() * s0.cast<cplx>() * U;
      for (auto &ch : extract_chains<cplx>(N, Br, fscale, ctx)) {
        CMat E = U * ch.W;
        Mat cols(n, 2 * ch.m);
        for (int j = 0; j < ch.m; ++j) {
          cols.col(2 * j) = std::sqrt(2.0) * E.col(j).real();
          cols.col(2 * j + 1) = -std::sqrt(2.0) * E.col(j).imag();
        }
        cb.push_back({2 * ch.m, mu, cols});
      }
    }
  }
  if (lower != upper)
    throw NumericalError("classify_pair: unstable classification (unpaired complex cluster)");

  std::stable_sort(rb.begin(), rb.end(), [](const RealBlock &a, const RealBlock &b) {
    if (a.fam != b.fam)
      return a.fam < b.fam;
    return real_before(a.lam, a.m, b.lam, b.m);
  });
  std::stable_sort(cb.begin(), cb.end(), [](const CplxBlock &a, const CplxBlock &b) {
    return cplx_before(a.lam, a.m2, b.lam, b.m2);
  });
  nf.P.resize(n, n);
  int o = 0;
  for (auto &b : rb) {
    nf.en.dn.fam[b.fam].push_back(b.m);
    nf.en.lam[b.fam].push_back(b.lam);
    nf.P.middleCols(o, b.m) = b.cols;
    o += b.m;
  }
  for (auto &b : cb) {
    nf.en.dn.m2.push_back(b.m2);
    nf.en.lamC.push_back(b.lam);
    nf.P.middleCols(o, b.m2) = b.cols;
    o += b.m2;
  }
  if (o != n)
    throw NumericalError("classify_pair: block dimensions do not add up");
  auto a = assemble(nf.en, false);
  nf.res0 = (nf.P.transpose() * s0 * nf.P - a.C).norm() / std::max(1.0, s0.norm());
  nf.res1 = (nf.P.transpose() * s1 * nf.P - a.D).norm() / std::max(1.0, s1.norm());
  if (nf.res0 > 1e-5 || nf.res1 > 1e-5)
    throw NumericalError("classify_pair: unstable classification (large congruence residual)");
  return nf;
}

double dual_pair_check(const Mat &b0, const Mat &b1, const PairNormalForm &nf,
                       const Ctx &ctx) {
  auto a = assemble(nf.en);
  auto ai = assemble(iota(nf.en), false);
  Mat X = inv_checked(Mat(a.Phi.transpose()), "dual_pair_check: back transformation", ctx);
  Mat V = nf.P * X;
  Mat b1v = V.transpose() * b1 * V, b0v = V.transpose() * b0 * V;
  Mat d1 = inv_checked(b1v, "dual_pair_check: b1 degenerate", ctx) - ai.C;
  Mat d0 = inv_checked(b0v, "dual_pair_check: b0 degenerate", ctx) - ai.D;
  return std::max(d1.norm() / std::max(1.0, ai.C.norm()),
                  d0.norm() / std::max(1.0, ai.D.norm()));
}

int signature_of_C(const DNData &d) {
  int s = 0;
  for (int x = 0; x < 4; ++x)
    for (int k : d.fam[x])
      if (k % 2)
        s += fam_eps(x);
  return s;
}

DNData realize_maslov_pair(int sT, int sT2, int n) {
  if (n < 1 || std::abs(sT) > n || std::abs(sT2) > n || (sT - n) % 2 || (sT2 - n) % 2)
    throw PreconditionError("realize_maslov_pair: signatures out of range or wrong parity");
  DNData d;
  int a = (sT + sT2) / 2, b = (sT - sT2) / 2;
  d.fam[0].assign(std::max(0, a), 1);
  d.fam[3].assign(std::max(0, -a), 1);
  d.fam[1].assign(std::max(0, b), 1);
  d.fam[2].assign(std::max(0, -b), 1);
  int rest = n - d.n();
  if (rest > 0)
    d.m2.push_back(rest);
  return d;
}

AutStructure automorphism_structure(const ENData &e) {
  struct Grp {
    cplx lam;
    bool complex;
    std::map<int, std::pair<int, int>, std::greater<int>> by_m; // m -> (p,q)
  };
  std::vector<Grp> gs;
  auto grp = [&](cplx l, bool c) -> Grp & {
    for (auto &g : gs)
      if (g.complex == c && std::abs(g.lam - l) <= 1e-9 * std::max(1.0, std::abs(l)))
        return g;
    gs.push_back({l, c, {}});
    return gs.back();
  };
  for (int x = 0; x < 4; ++x)
    for (size_t j = 0; j < e.dn.fam[x].size(); ++j) {
      auto &pq = grp(e.lam[x][j], false).by_m[e.dn.fam[x][j]];
      (fam_eps(x) > 0 ? pq.first : pq.second)++;
    }
  for (size_t j = 0; j < e.dn.m2.size(); ++j)
    grp(e.lamC[j], true).by_m[e.dn.m2[j] / 2].first++;
  AutStructure a;
  for (auto &g : gs) {
    int w = g.complex ? 2 : 1;
    std::vector<int> ms, ds;
    for (auto &[m, pq] : g.by_m) {
      a.levi.push_back({g.lam, m, pq.first, pq.second, g.complex});
      int d = pq.first + pq.second;
      a.levi_dim += w * d * (d - 1) / 2;
      ms.push_back(m);
      ds.push_back(d);
    }
    int mmax = ms.empty() ? 0 : ms.front();
    for (int s = 1; s < mmax; ++s)
      for (size_t i = 0; i < ms.size(); ++i) {
        if (ms[i] <= s)
          continue;
        a.unipotent_dim += w * ds[i] * (ds[i] - 1) / 2;
        // ms is decreasing: a_ij with the larger block as row is the free
        // half of the antisymmetric pair
        for (size_t j = i + 1; j < ms.size(); ++j)
          if (ms[i] - ms[j] <= s)
            a.unipotent_dim += w * ds[i] * ds[j];
      }
  }
  a.total_dim = a.levi_dim + a.unipotent_dim;
  return a;
}

int cone_dimension(const DNData &d) {
  int k = 0;
  for (auto &f : d.fam)
    k += int(f.size());
  return k + 2 * int(d.m2.size());
}

ENData rand_en(Rng &rng, int n, double p_complex, double p_repeat, double sep) {
  std::uniform_real_distribution<double> U(0, 1);
  ENData e;
  std::vector<double> reals;
  std::vector<cplx> cpx;
  auto fresh_real = [&]() {
    for (int t = 0; t < 200; ++t) {
      double l = (0.5 + 3.5 * U(rng)) * (U(rng) < 0.5 ? -1 : 1);
      bool ok = true;
      for (double r : reals)
        ok = ok && std::abs(r - l) >= sep;
      if (ok)
        return l;
    }
    throw NumericalError("rand_en: could not place a separated eigenvalue");
  };
  auto fresh_cplx = [&]() {
    for (int t = 0; t < 200; ++t) {
      cplx l(-3 + 6 * U(rng), 0.5 + 2.5 * U(rng));
      bool ok = true;
      for (cplx r : cpx)
        ok = ok && std::abs(r - l) >= sep;
      if (ok)
        return l;
    }
    throw NumericalError("rand_en: could not place a separated eigenvalue");
  };
  int rem = n;
  while (rem > 0) {
    if (rem >= 2 && U(rng) < p_complex) {
      int m = 1 + int(rng() % std::min(2, rem / 2));
      cplx l = (!cpx.empty() && U(rng) < p_repeat) ? cpx[rng() % cpx.size()] : fresh_cplx();
      if (std::find(cpx.begin(), cpx.end(), l) == cpx.end())
        cpx.push_back(l);
      e.dn.m2.push_back(2 * m);
      e.lamC.push_back(l);
      rem -= 2 * m;
    } else {
      int m = 1 + int(rng() % std::min(3, rem));
      double l = (!reals.empty() && U(rng) < p_repeat) ? reals[rng() % reals.size()] : fresh_real();
      if (std::find(reals.begin(), reals.end(), l) == reals.end())
        reals.push_back(l);
      int eps = U(rng) < 0.5 ? 1 : -1;
      int x = fam_index(eps, eps * l > 0 ? 1 : -1);
      e.dn.fam[x].push_back(m);
      e.lam[x].push_back(l);
      rem -= m;
    }
  }
  sort_en(e);
  return e;
}

} // namespace symp
