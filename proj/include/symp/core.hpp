#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace symp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;
using Rng = std::mt19937_64;

struct Ctx {
  double tol = 1e-9;
  double cluster_tol = 1e-6;
};

// precondition violations and numerical breakdowns are kept apart so the
// CLI can map them to different exit codes
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Mat J(int n);
double omega(const Vec &x, const Vec &y);
// ω evaluated on all column pairs
Mat omega_mat(const Mat &a, const Mat &b);

bool is_symplectic(const Mat &g, const Ctx &ctx = {});

struct Lagrangian {
  Mat span; // 2n×n, orthonormal columns
  int n() const { return int(span.cols()); }
};

struct LiftedLagrangian {
  Lagrangian lag;
  double theta = 0;
};

Lagrangian make_lag(const Mat &cols, const Ctx &ctx = {});
Lagrangian L0(int n);
Lagrangian L0perp(int n);
bool transverse(const Lagrangian &a, const Lagrangian &b, const Ctx &ctx = {});
bool same_lag(const Lagrangian &a, const Lagrangian &b, const Ctx &ctx = {});
Lagrangian apply(const Mat &g, const Lagrangian &l, const Ctx &ctx = {});

// basis v of L1, M a graph over L1 along L2
Mat maslov_form(const Mat &v, const Lagrangian &M, const Lagrangian &L2,
                const Ctx &ctx = {});
int maslov_index(const Lagrangian &a, const Lagrangian &b, const Lagrangian &c,
                 const Ctx &ctx = {});

std::vector<double> lag_angles(const Lagrangian &M, const Ctx &ctx = {});
LiftedLagrangian lift(const Lagrangian &M, int k, const Ctx &ctx = {});
LiftedLagrangian shift_theta(const LiftedLagrangian &l, int k);
int souriau_index(const LiftedLagrangian &a, const LiftedLagrangian &b,
                  const Ctx &ctx = {});
// extension through an explicit auxiliary lift, transverse to both
int souriau_index_via(const LiftedLagrangian &a, const LiftedLagrangian &b,
                      const LiftedLagrangian &aux, const Ctx &ctx = {});
// the fixed family used to pick the auxiliary lift
Lagrangian aux_lagrangian(int n, int j);

// small dense helpers
int signature(const Mat &s, double tol);
Mat symmetrize(const Mat &a);
bool is_pos_def(const Mat &s, double tol);
Mat sym_sqrt(const Mat &s, const Ctx &ctx = {});
Mat sym_invsqrt(const Mat &s, const Ctx &ctx = {});
Mat sym_log(const Mat &s, const Ctx &ctx = {});
Mat sym_exp(const Mat &s);
Mat blocks(const Mat &a, const Mat &b, const Mat &c, const Mat &d);
Mat diag2(const Mat &a, const Mat &b);
double rel_err(const Mat &a, const Mat &b);
// inverse with a conditioning check; throws PreconditionError naming `what`
Mat inv_checked(const Mat &a, const char *what, const Ctx &ctx = {});

// random generators shared by tests, acceptance and the CLI
Mat rand_mat(Rng &rng, int r, int c);
Mat rand_gl(Rng &rng, int n, double cond_cap = 50.0);
Mat rand_sym(Rng &rng, int n);
Mat rand_spd(Rng &rng, int n);
Mat rand_orth(Rng &rng, int n);
Mat rand_so(Rng &rng, int n);
Mat rand_sp(Rng &rng, int n);
Lagrangian rand_lag(Rng &rng, int n);

} // namespace symp
