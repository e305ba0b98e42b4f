#pragma once

#include "symp/localsys.hpp"
#include "symp/pairforms.hpp"

#include <optional>

namespace symp {

// positive coordinates: A2 arrows carry symmetric positive matrices (equal
// across a 2-cycle), A3 arrows carry orthogonal matrices with product Id
// around each face
struct XPlus {
  int n = 1;
  std::vector<Mat> x; // per arrow id
};

// one arrow of every 2-cycle: the one with the smaller source
std::vector<int> default_E(const Quiver &q);

// delta: edge values must be diagonal, positive and nondecreasing
double xplus_residual(const Quiver &q, const XPlus &x, bool delta);
void require_xplus(const Quiver &q, const XPlus &x, bool delta, const Ctx &ctx = {});
FramedSystem hol_xplus(const Quiver &q, const XPlus &x, const Ctx &ctx = {});

struct XPlusExtract {
  XPlus x;
  std::vector<Mat> psi; // gauge(sys, psi) = hol_xplus(x)
};
XPlusExtract extract_xplus(const FramedSystem &sys, const Ctx &ctx = {});

// r per vertex, equal across 2-cycles and commuting with the edge values
XPlus fiber_act(const Quiver &q, const XPlus &x, const std::vector<Mat> &r,
                const Ctx &ctx = {});
// the symplectic gauge realizing a fiber move: diag(r, r)
std::vector<Mat> fiber_gauge(const std::vector<Mat> &r);

struct Normalized {
  XPlus x;
  std::vector<Mat> r; // per vertex; x' = r₊ x r₋⁻¹
};
Normalized normalize_to_tree(const Quiver &q, const XPlus &x, const SpanningData &sd,
                             const Ctx &ctx = {});

enum class Equiv { Yes, No, Indeterminate };
// is there r (per vertex, equal across 2-cycles, orthogonal) with
// y = r₊ x r₋⁻¹ on every arrow? Decided when the root edge has simple spectrum.
Equiv same_orbit(const Quiver &q, const XPlus &x, const XPlus &y, const SpanningData &sd,
                 const Ctx &ctx = {});

// random data
XPlus rand_xplus_delta(const Quiver &q, int n, Rng &rng);
// tree-normalized: Id on S, random on R and on E edges
XPlus rand_xs(const Quiver &q, const SpanningData &sd, int n, Rng &rng);

// general coordinates on the transverse locus
struct XE {
  int n = 1;
  std::vector<ENData> en; // per arrow id; A2 arrows only
  std::vector<Mat> S;     // per vertex
  std::vector<Mat> Y;     // per arrow id; A3 arrows only
};
Mat Ipq(int p, int q);
double xe_residual(const Quiver &q, const XE &x, const Ctx &ctx = {});
FramedSystem hol_xE(const Quiver &q, const XE &x, const Ctx &ctx = {});

struct XEOptions {
  // per-face signature; empty means random
  std::vector<int> face_sig;
  double p_complex = 0.3, p_repeat = 0.2;
};
XE rand_xe(const Quiver &q, int n, Rng &rng, const XEOptions &opt = {});

struct XEExtract {
  XE x;
  std::vector<Mat> psi;
};
XEExtract extract_xE(const FramedSystem &sys, const Ctx &ctx = {});

// over-parameterization: S per vertex, Y per arrow (A2 included)
struct XOver {
  int n = 1;
  std::vector<Mat> S;
  std::vector<Mat> Y;
};
XOver over_from_xe(const Quiver &q, const XE &x);
double xover_residual(const Quiver &q, const XOver &z);
FramedSystem hol_over(const Quiver &q, const XOver &z, const Ctx &ctx = {});
XOver gauge_over(const Quiver &q, const XOver &z, const std::vector<Mat> &g);
// symplectic gauge matching gauge_over: diag(ᵀg⁻¹, g)
std::vector<Mat> over_gauge_symplectic(const std::vector<Mat> &g);

struct ZClass {
  std::vector<int> s; // signature per vertex
  std::vector<int> h; // sign det Y per arrow
  bool operator==(const ZClass &o) const = default;
};
ZClass pi_components(const Quiver &q, const XOver &z, const Ctx &ctx = {});
bool in_Z(const Quiver &q, int n, const ZClass &c);
ZClass act_FZ(const Quiver &q, const ZClass &c, const std::vector<int> &eps);
bool same_FZ_orbit(const Quiver &q, const ZClass &a, const ZClass &b);

// Isogenic*: a group with centre of order x_G in place of Sp(2n,R)
enum class CountMode { Transverse, Maximal, Isogenic, IsogenicMaximal };
long long count_components(const Triangulation &T, int n, CountMode mode, int xG = 1);
// exhaustive orbit count of Z(T,n) under F_Z (small cases only)
long long brute_force_components(const Quiver &q, int n, bool maximal);

enum class RetractTarget { Identity, Scalar };
XPlus retraction_path(const Quiver &q, const XPlus &z, double t, RetractTarget target,
                      const Ctx &ctx = {});

struct Sp4Class {
  std::vector<double> t;
  std::vector<cplx> z;
  std::vector<Mat> r;
  std::string stabilizer; // O2, SO2, G_theta, pm_Id
  double theta = 0;       // meaningful for G_theta, defined mod π
  std::string membership; // SL2, SL2xSO2, SL2xSL2, generic
};
Sp4Class sp4_classify(const Quiver &q, const SpanningData &sd, const XPlus &z,
                      const Ctx &ctx = {});

int piece_dimension_formula(const Quiver &q, const XE &x);
int piece_dimension_numeric(const Quiver &q, const XE &x, const Ctx &ctx = {});

} // namespace symp
