#pragma once

#include <array>
#include <string>
#include <vector>

namespace symp {

struct SurfaceSpec {
  int g = 0, k = 1;
  std::vector<int> marks; // marked points on each non-compact boundary circle
  int r() const;
  int p() const { return k - int(marks.size()); }
  int chibar() const { return 2 - 2 * g - k; }
  // signed count e = -χ̄; negative only for the disk
  int e() const { return -chibar(); }
  bool operator==(const SurfaceSpec &o) const = default;
};

// Slot (f,s) is the side of face f from corner s to corner s+1 (mod 3);
// slot id 3f+s. Faces are counterclockwise. Gluing reverses orientation,
// so corner (f,s) meets (f',s'+1) and (f,s+1) meets (f',s').
struct Triangulation {
  SurfaceSpec surf;
  std::vector<int> partner;              // size 3F, -1 for external slots
  std::vector<std::array<int, 3>> corner; // boundary-component label per corner
  int faces() const { return int(partner.size()) / 3; }
  int slots() const { return int(partner.size()); }
  bool external(int v) const { return partner[v] < 0; }
  int n_external() const;
  int n_edges() const;
  // representative slot of each unoriented edge (smaller slot of a pair)
  std::vector<int> edges() const;
  int edge_of(int v) const; // index into edges()
  int b(int v) const { return corner[v / 3][v % 3]; }
  int t(int v) const { return corner[v / 3][(v % 3 + 1) % 3]; }
  int n_labels() const;
};

struct DerivedSurface {
  int V, E, F;
  SurfaceSpec surf;
};

DerivedSurface derive_surface(const Triangulation &T);
// throws PreconditionError on any inconsistency
void validate(const Triangulation &T);

enum class Preset { Polygon, OncePuncturedTorus, PairOfPants, Annulus, Genus2 };
// r is the marked-point count for polygon and annulus, ignored otherwise
Triangulation build_surface(Preset p, int r = 0);
// "polygon:5", "torus", "pants", "annulus:3", "genus2"
Triangulation build_surface(const std::string &name);

Triangulation flip(const Triangulation &T, int slot);
// same triangulation up to renumbering faces and rotating slots; corner
// labels must agree when `labels` is set
bool isomorphic(const Triangulation &A, const Triangulation &B, bool labels = true);
// where the slots of T go under flip(T, slot); the flipped pair maps to
// the new diagonal slots
std::vector<int> flip_slot_map(const Triangulation &T, int slot);
// slot whose side joins labels a and b (a→b direction on the side), or -1
int find_side(const Triangulation &T, int a, int b);

enum class ArrowKind { A2, A3 };
struct Arrow {
  int from, to;
  ArrowKind kind;
  int face = -1; // for A3
};

struct Quiver {
  Triangulation T;
  std::vector<Arrow> arrows; // A3 arrows first (id 3f+s), then A2
  int n_vertices() const { return T.slots(); }
  bool external(int v) const { return T.external(v); }
  int a3_into(int v) const;  // the A3 arrow ending at v
  int a3_out(int v) const;   // the A3 arrow starting at v
  int a2_out(int v) const;   // -1 when v is external
  int a2_into(int v) const;
  int partner_arrow(int a) const; // the other arrow of an A2 2-cycle
  int n_a2() const { return int(arrows.size()) - T.slots(); }
};

Quiver build_quiver(const Triangulation &T);

struct SpanningData {
  std::vector<int> S, R, E;
  int a0 = -1;
};
// seed: an A2 arrow id; breadth-first from the edge of its source
SpanningData spanning_data(const Quiver &q, int seed);

// closed walk around a compact boundary component (alternating A3, A2);
// returns arrow ids in order, starting at vertex `start` with b(start) = label
std::vector<int> boundary_cycle(const Quiver &q, int label);
std::vector<int> compact_labels(const Triangulation &T);

// zigzag sequences for the diagonal i→j of a triangulated polygon; each
// sequence is the vertex path j0 = i, …, j_{2m+1} = j
std::vector<std::vector<int>> enumerate_zigzag(const Triangulation &T, int i,
                                               int j);
// cyclic position of each label along the polygon boundary
std::vector<int> polygon_order(const Triangulation &T);
// whether {a,b} is an edge of T
bool has_arc(const Triangulation &T, int a, int b);

} // namespace symp
