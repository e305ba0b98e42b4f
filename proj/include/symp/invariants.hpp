#pragma once

#include "symp/core.hpp"

namespace symp {

struct Quadruple {
  Lagrangian L1, M1, L2, M2;
};

struct PositiveCert {
  Mat basis;  // 2n×2n, columns e then f
  Mat Lambda; // diagonal, nondecreasing positive
  Mat e() const { return basis.leftCols(basis.cols() / 2); }
  Mat f() const { return basis.rightCols(basis.cols() / 2); }
};

// X with M = span(v + w·X); v, w bases of transverse Lagrangians
Mat graph_matrix(const Mat &v, const Mat &w, const Lagrangian &M,
                 const Ctx &ctx = {});
// w dual to v: ω(vᵢ, wⱼ) = δᵢⱼ, with span(w) = L
Mat dual_basis(const Mat &v, const Lagrangian &L, const Ctx &ctx = {});

Mat cross_ratio(const Quadruple &q, const Mat &basis_L1, const Ctx &ctx = {});
bool is_positive_quadruple(const Quadruple &q, const Ctx &ctx = {});
PositiveCert standard_basis_positive(const Quadruple &q, const Ctx &ctx = {});
Quadruple kappa(const Quadruple &q);
// quadruple (span e, span(e+f), span f, span(e − fΛ)) in a symplectic basis
Quadruple standard_quadruple(const Mat &basis, const Mat &Lambda,
                             const Ctx &ctx = {});

struct AngleInvariant {
  Mat A;                    // raw representative, orthogonal
  Mat Lambda_b, Lambda_c;   // the two stabilizer data
  bool canonical = false;   // true when both spectra are simple
  Mat canon;                // sign-canonical representative when available
};
AngleInvariant angle_invariant(const Lagrangian &La, const Lagrangian &Mc,
                               const Lagrangian &Lb, const Lagrangian &Lc,
                               const Lagrangian &Mb, const Ctx &ctx = {});
// canonical representative of the class of A modulo diagonal ±1 on both sides
Mat sign_canonical(const Mat &A);

Mat lambda_length(const Mat &v, const Mat &w);
std::pair<Mat, Mat> decompose_in_frame(const Mat &v1, const Mat &v2,
                                       const Mat &v3, const Ctx &ctx = {});
double check_triangle_relation(const Mat &v1, const Mat &v2, const Mat &v3,
                               const Ctx &ctx = {});
double check_ptolemy(const Mat &v1, const Mat &v2, const Mat &v3,
                     const Mat &v4, const Ctx &ctx = {});
int maslov_via_lambda(const Mat &v1, const Mat &v2, const Mat &v3,
                      const Ctx &ctx = {});
Mat cross_ratio_via_lambda(const Mat &v1, const Mat &v2, const Mat &v3,
                           const Mat &v4, const Ctx &ctx = {});

struct CBATriple {
  Lagrangian La, Lb, Lc;
  Mat basis_a, basis_b, basis_c; // 2n×2n symplectic bases
};
Mat cba_block(const Mat &X);
CBATriple triple_from_CBA(const Mat &A, const Mat &B, const Mat &C,
                          const Mat &base, const Ctx &ctx = {});
// recover (A,B,C) from the three chained bases
std::tuple<Mat, Mat, Mat> CBA_from_triple(const CBATriple &t,
                                          const Ctx &ctx = {});

} // namespace symp
