#pragma once

#include "symp/core.hpp"

#include <array>

namespace symp {

// families are indexed 0..3 as (1,1), (1,-1), (-1,1), (-1,-1)
inline int fam_eps(int x) { return x < 2 ? 1 : -1; }
inline int fam_eta(int x) { return (x == 0 || x == 2) ? 1 : -1; }
inline int fam_index(int eps, int eta) {
  return (eps > 0 ? 0 : 2) + (eta > 0 ? 0 : 1);
}

struct DNData {
  std::array<std::vector<int>, 4> fam; // n11, n1m, nm1, nmm
  std::vector<int> m2;                 // even sizes
  int n() const;
  bool operator==(const DNData &o) const = default;
};

struct ENData {
  DNData dn;
  std::array<std::vector<double>, 4> lam;
  std::vector<cplx> lamC;
};

DNData iota(const DNData &d);
ENData iota(const ENData &e);
// throws PreconditionError when an invariant of the parameter space fails
void validate(const ENData &e, double tol = 1e-12);
// canonical order: λ decreasing, ties by size nonincreasing
void sort_en(ENData &e);
bool en_close(const ENData &a, const ENData &b, double tol);
std::string to_string(const ENData &e);

enum class BlockKind { C, J, Cp, Jp, Phi, Psi };
// size is the matrix size (even for the primed kinds and Ψ)
Mat build_block(BlockKind kind, int size, cplx lambda = 0.0);

// s(M) and r(M): each complex entry x+iy becomes a real 2×2 block
Mat s_of(const CMat &m);
Mat r_of(const CMat &m);

struct Assembled {
  Mat C, J, D;
  Mat Phi; // rows in the layout of n, columns in the layout of ι(n)
};
Assembled assemble(const ENData &e, bool with_phi = true);

struct PairNormalForm {
  ENData en;
  Mat P; // ᵀP b0 P = C(n), ᵀP b1 P = D(n, λ)
  double res0 = 0, res1 = 0;
  // smallest distance between distinct eigenvalue clusters, relative to
  // the spectral radius; small values mean the block data is fragile
  double margin = 0;
};

PairNormalForm classify_pair(const Mat &b0, const Mat &b1, const Ctx &ctx = {});

// residual of the dual-pair identities for the basis v = e·ᵀΦ⁻¹
double dual_pair_check(const Mat &b0, const Mat &b1, const PairNormalForm &nf,
                       const Ctx &ctx = {});

int signature_of_C(const DNData &d);
DNData realize_maslov_pair(int sT, int sT2, int n);

struct LeviFactor {
  cplx lambda;
  int m; // Jordan size (over ℂ for complex clusters)
  int p, q;
  bool complex;
};
struct AutStructure {
  std::vector<LeviFactor> levi;
  int levi_dim = 0;
  int unipotent_dim = 0;
  int total_dim = 0;
};
AutStructure automorphism_structure(const ENData &e);

int cone_dimension(const DNData &d);

// random element of E(n); eigenvalues kept at least `sep` apart
ENData rand_en(Rng &rng, int n, double p_complex = 0.3, double p_repeat = 0.3,
               double sep = 0.3);

} // namespace symp
