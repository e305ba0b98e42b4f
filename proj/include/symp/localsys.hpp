#pragma once

#include "symp/core.hpp"
#include "symp/surface.hpp"

namespace symp {

// Transition matrices in generating bases: at every vertex the first n
// coordinates span L^t and the last n span L^b.
struct FramedSystem {
  Quiver q;
  int n = 1;
  std::vector<Mat> G; // one per arrow id
};

struct SystemResiduals {
  double symplectic = 0, two_cycle = 0, three_cycle = 0, shape = 0;
  double max() const;
};
SystemResiduals validate(const FramedSystem &sys, const Ctx &ctx = {});
// throws PreconditionError when any residual exceeds sqrt(τ)
void require_valid(const FramedSystem &sys, const Ctx &ctx = {});

// blocks of a transition matrix
Mat block_C(const Mat &G); // bottom-left (B for A2 arrows)
Mat block_M(const Mat &G, const Ctx &ctx = {}); // top-left · C⁻¹, symmetrized

// arrows of the 3-cycle of face f, in cycle order starting at slot 3f
std::array<int, 3> face_cycle(const Quiver &q, int f);

int mu_T(const FramedSystem &sys, int face, const Ctx &ctx = {});
double toledo(const FramedSystem &sys, const Ctx &ctx = {});
bool is_maximal(const FramedSystem &sys, const Ctx &ctx = {});

// (X, Z) at vertex v: the third Lagrangians of the two faces through the
// edge of v, as graphs span(e + fX) and span(e − fZ)
std::pair<Mat, Mat> vertex_pair(const FramedSystem &sys, int v, const Ctx &ctx = {});
Mat vertex_cross_ratio(const FramedSystem &sys, int v, const Ctx &ctx = {});
// C of the A3 arrow spanning the corner; needs M = Id and diagonal B
Mat corner_angle_invariant(const FramedSystem &sys, int a3, const Ctx &ctx = {});

FramedSystem gauge(const FramedSystem &sys, const std::vector<Mat> &psi);
Mat boundary_holonomy(const FramedSystem &sys, int label);

// transport to flip(T, slot); vertex spaces of surviving sides are kept
FramedSystem flip_system(const FramedSystem &sys, int slot, const Ctx &ctx = {});

// whether gauge(a, psi) reproduces b
double gauge_residual(const FramedSystem &a, const std::vector<Mat> &psi,
                      const FramedSystem &b);

} // namespace symp
