#pragma once

#include "symp/localsys.hpp"

namespace symp {

// Λ-length chart: H[v] is the value on the arc α_v, which runs from the
// corner t(v) to the corner b(v). For an interior slot the partner holds ᵀH.
struct ACoords {
  int n = 1;
  std::vector<Mat> H; // per slot
};

struct AResiduals {
  double transpose = 0, face = 0;
  double max() const { return std::max(transpose, face); }
};
AResiduals check_acoords(const Triangulation &T, const ACoords &A);

// value on the arc x→y of T (labels), or throws when it is not an edge
Mat arc_value(const Triangulation &T, const ACoords &A, int x, int y);

// ᵀH_s H_{s+1}⁻¹ ᵀH_{s+2} for face f (symmetric on the A-space)
Mat face_product(const ACoords &A, int f, const Ctx &ctx = {});
bool is_maximal_acoords(const Triangulation &T, const ACoords &A, const Ctx &ctx = {});

// decorated system: transition matrices in generating bases plus the
// decorating bases Ft (of L^t) and Fb (of L^b) at every vertex
struct Decorated {
  FramedSystem sys;
  std::vector<Mat> Ft, Fb; // 2n×n each
};
Decorated reconstruct_system(const Triangulation &T, const ACoords &A, const Ctx &ctx = {});
// g_a(Fb at the source) = Ft at the target, both decorations isotropic
double decoration_residual(const Decorated &d);
ACoords lambda_of_system(const Decorated &d);

// Ptolemy transport to flip(T, slot); throws NumericalError when the new
// value is singular
ACoords flip_acoords(const Triangulation &T, const ACoords &A, int slot, const Ctx &ctx = {});

// random point of the A-space near Id, projected onto the relations
ACoords rand_acoords(const Triangulation &T, int n, Rng &rng, double spread = 0.4);

// ---- polygon geometry: decorated Lagrangians at the vertices

// vectors v[label] (2n×n); G_{i→j} = ω(v_i, v_j) when i precedes j along the
// polygon, −ω(v_i, v_j) otherwise
Mat geometric_arc(const Triangulation &T, const std::vector<Mat> &v, int i, int j);
ACoords acoords_from_config(const Triangulation &T, const std::vector<Mat> &v);
// L_k = span(e + f S_k) with S_k increasing, moved by a random symplectic
// map and decorated by random bases
std::vector<Mat> rand_maximal_config(Rng &rng, int p, int n);

// −Λ41⁻¹Λ43Λ23⁻¹Λ21 for the arc 1→3 of the quadrilateral (1,2,3,4)
Mat cross_ratio_of_arc(const Mat &v1, const Mat &v2, const Mat &v3, const Mat &v4,
                       const Ctx &ctx = {});

struct CRFlipReport {
  double r84 = 0, r64 = 0, r82 = 0, r68 = 0, r42 = 0;
  // residuals of the variants CR'82 = (Id + Λ68⁻¹ ᵀCR62⁻¹ Λ68)·CR82 and
  // CR'42 = CR42·(Id + Λ64⁻¹ CR62 Λ64); not part of max()
  double alt82 = 0, alt42 = 0;
  double max() const;
};
// v has 8 entries for the labels 1..8 of the octagon
CRFlipReport verify_cross_ratio_flip(const std::vector<Mat> &v, const Ctx &ctx = {});

// Σ over zigzag sequences of G_{δ1} G_{δ̄2}⁻¹ G_{δ3} ⋯ for the diagonal i→j
Mat laurent_expand(const Triangulation &T, const ACoords &A, int i, int j, const Ctx &ctx = {});

} // namespace symp
