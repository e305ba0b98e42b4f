#include "symp/surface.hpp"
#include "symp/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace symp {

int SurfaceSpec::r() const { return std::accumulate(marks.begin(), marks.end(), 0); }

int Triangulation::n_external() const {
  return int(std::count(partner.begin(), partner.end(), -1));
}

int Triangulation::n_edges() const { return (slots() + n_external()) / 2; }

std::vector<int> Triangulation::edges() const {
  std::vector<int> out;
  for (int v = 0; v < slots(); ++v)
    if (partner[v] < 0 || v < partner[v])
      out.push_back(v);
  return out;
}

int Triangulation::edge_of(int v) const {
  int rep = (partner[v] >= 0 && partner[v] < v) ? partner[v] : v;
  int idx = 0;
  for (int u = 0; u < rep; ++u)
    if (partner[u] < 0 || u < partner[u])
      ++idx;
  return idx;
}

int Triangulation::n_labels() const {
  std::set<int> s;
  for (auto &c : corner)
    s.insert(c.begin(), c.end());
  return int(s.size());
}

// union-find of corners under the gluing, labelled by first appearance
static std::vector<std::array<int, 3>> glue_labels(const std::vector<int> &partner) {
  int F = int(partner.size()) / 3;
  std::vector<int> par(3 * F);
  std::iota(par.begin(), par.end(), 0);
  std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
  auto unite = [&](int a, int b) { par[find(a)] = find(b); };
  auto cid = [](int f, int s) { return 3 * f + (s % 3); };
  for (int v = 0; v < 3 * F; ++v) {
    int w = partner[v];
    if (w < 0)
      continue;
    int f = v / 3, s = v % 3, f2 = w / 3, s2 = w % 3;
    unite(cid(f, s), cid(f2, s2 + 1));
    unite(cid(f, s + 1), cid(f2, s2));
  }
  std::map<int, int> lab;
  std::vector<std::array<int, 3>> out(F);
  for (int f = 0; f < F; ++f)
    for (int s = 0; s < 3; ++s) {
      int r = find(cid(f, s));
      auto it = lab.find(r);
      if (it == lab.end())
        it = lab.emplace(r, int(lab.size())).first;
      out[f][s] = it->second;
    }
  return out;
}

DerivedSurface derive_surface(const Triangulation &T) {
  DerivedSurface d;
  d.F = T.faces();
  d.E = T.n_edges();
  d.V = T.n_labels();
  // external edges form the non-compact boundary circles
  std::map<int, int> next; // label -> label along external sides
  std::set<int> on_ext;
  for (int v = 0; v < T.slots(); ++v)
    if (T.external(v)) {
      int a = T.corner[v / 3][v % 3], b = T.corner[v / 3][(v % 3 + 1) % 3];
      if (next.count(a))
        throw PreconditionError("triangulation: two external sides leave one marked point");
      next[a] = b;
      on_ext.insert(a);
      on_ext.insert(b);
    }
  std::set<int> seen;
  std::vector<int> marks;
  for (auto &[a, _] : next) {
    if (seen.count(a))
      continue;
    int len = 0, x = a;
    while (!seen.count(x)) {
      seen.insert(x);
      ++len;
      auto it = next.find(x);
      if (it == next.end())
        throw PreconditionError("triangulation: external sides do not close up");
      x = it->second;
    }
    if (x != a)
      throw PreconditionError("triangulation: external sides do not close up");
    marks.push_back(len);
  }
  int p = d.V - int(on_ext.size());
  int k = p + int(marks.size());
  int chi = d.V - d.E + d.F;
  int twice_g = 2 - int(marks.size()) - chi;
  if (twice_g < 0 || twice_g % 2)
    throw PreconditionError("triangulation: inconsistent Euler count");
  std::sort(marks.begin(), marks.end());
  d.surf.g = twice_g / 2;
  d.surf.k = k;
  d.surf.marks = marks;
  return d;
}

void validate(const Triangulation &T) {
  int N = T.slots();
  if (N == 0 || N % 3 || int(T.corner.size()) != T.faces())
    throw PreconditionError("triangulation: malformed face list");
  for (int v = 0; v < N; ++v) {
    int w = T.partner[v];
    if (w < -1 || w >= N || w == v || (w >= 0 && T.partner[w] != v))
      throw PreconditionError("triangulation: gluing is not an involution");
  }
  // labels must be exactly the gluing classes
  auto uf = glue_labels(T.partner);
  std::map<int, int> m1, m2;
  for (int f = 0; f < T.faces(); ++f)
    for (int s = 0; s < 3; ++s) {
      auto [i1, ok1] = m1.emplace(uf[f][s], T.corner[f][s]);
      auto [i2, ok2] = m2.emplace(T.corner[f][s], uf[f][s]);
      if (i1->second != T.corner[f][s] || i2->second != uf[f][s])
        throw PreconditionError("triangulation: corner labels disagree with gluing");
    }
  const auto &S = T.surf;
  if (4 * S.g - 4 + 2 * S.k + S.r() <= 0)
    throw PreconditionError("surface: 4g-4+2k+r must be positive");
  for (int m : S.marks)
    if (m < 1)
      throw PreconditionError("surface: marked boundary circles need a marked point");
  int e = S.e(), r = S.r();
  if (T.faces() != 2 * e + r || T.n_edges() != 3 * e + 2 * r || T.n_external() != r)
    throw PreconditionError("triangulation: counts disagree with the surface");
  auto d = derive_surface(T);
  auto want = S.marks;
  std::sort(want.begin(), want.end());
  if (d.surf.g != S.g || d.surf.k != S.k || d.surf.marks != want)
    throw PreconditionError("triangulation: derived surface disagrees with the declared topology");
}

static Triangulation finish(SurfaceSpec s, std::vector<int> partner) {
  Triangulation T;
  T.surf = std::move(s);
  T.corner = glue_labels(partner);
  T.partner = std::move(partner);
  validate(T);
  return T;
}

static void glue(std::vector<int> &p, int a, int b) {
  p[a] = b;
  p[b] = a;
}

Triangulation build_surface(Preset preset, int r) {
  switch (preset) {
  case Preset::Polygon: {
    if (r < 3)
      throw PreconditionError("polygon needs r >= 3");
    int F = r - 2;
    std::vector<int> p(3 * F, -1);
    for (int j = 0; j + 1 < F; ++j)
      glue(p, 3 * j + 2, 3 * (j + 1) + 0);
    return finish({0, 1, {r}}, p);
  }
  case Preset::OncePuncturedTorus: {
    std::vector<int> p(6, -1);
    glue(p, 2, 3);
    glue(p, 0, 4);
    glue(p, 1, 5);
    return finish({1, 1, {}}, p);
  }
  case Preset::PairOfPants: {
    std::vector<int> p(6, -1);
    glue(p, 0, 5);
    glue(p, 1, 4);
    glue(p, 2, 3);
    return finish({0, 3, {}}, p);
  }
  case Preset::Annulus: {
    if (r < 1)
      throw PreconditionError("annulus needs r >= 1");
    std::vector<int> p(3 * r, -1);
    for (int i = 0; i < r; ++i) {
      int a = 3 * i + 1, b = 3 * ((i + 1) % r) + 2;
      glue(p, a, b);
    }
    return finish({0, 2, {r}}, p);
  }
  case Preset::Genus2: {
    // octagon fan, sides j→j+1 paired as (0,2), (1,3), (4,6), (5,7)
    std::vector<int> p(18, -1);
    for (int j = 0; j < 5; ++j)
      glue(p, 3 * j + 2, 3 * (j + 1));
    auto side = [](int j) { return j == 0 ? 0 : j == 7 ? 17 : 3 * (j - 1) + 1; };
    glue(p, side(0), side(2));
    glue(p, side(1), side(3));
    glue(p, side(4), side(6));
    glue(p, side(5), side(7));
    return finish({2, 1, {}}, p);
  }
  }
  throw PreconditionError("unknown preset");
}

Triangulation build_surface(const std::string &name) {
  auto colon = name.find(':');
  std::string base = name.substr(0, colon);
  int r = 0;
  if (colon != std::string::npos) {
    try {
      r = std::stoi(name.substr(colon + 1));
    } catch (...) {
      throw PreconditionError("bad surface parameter in '" + name + "'");
    }
  }
  if (base == "polygon")
    return build_surface(Preset::Polygon, r);
  if (base == "torus" || base == "once_punctured_torus")
    return build_surface(Preset::OncePuncturedTorus);
  if (base == "pants" || base == "pair_of_pants")
    return build_surface(Preset::PairOfPants);
  if (base == "annulus")
    return build_surface(Preset::Annulus, r);
  if (base == "genus2")
    return build_surface(Preset::Genus2);
  throw PreconditionError("unknown surface '" + name + "'");
}

static void check_flippable(const Triangulation &T, int slot) {
  if (slot < 0 || slot >= T.slots())
    throw PreconditionError("flip: no such slot");
  if (T.external(slot))
    throw PreconditionError("flip: edge is external");
  if (slot / 3 == T.partner[slot] / 3)
    throw PreconditionError("flip: both sides of the edge lie in one face");
}

std::vector<int> flip_slot_map(const Triangulation &T, int slot) {
  check_flippable(T, slot);
  int f = slot / 3, s = slot % 3;
  int w = T.partner[slot], f2 = w / 3, s2 = w % 3;
  std::vector<int> m(T.slots());
  std::iota(m.begin(), m.end(), 0);
  m[3 * f + (s + 2) % 3] = 3 * f + 0;
  m[3 * f2 + (s2 + 1) % 3] = 3 * f + 1;
  m[3 * f2 + (s2 + 2) % 3] = 3 * f2 + 0;
  m[3 * f + (s + 1) % 3] = 3 * f2 + 1;
  m[slot] = 3 * f + 2;
  m[w] = 3 * f2 + 2;
  return m;
}

Triangulation flip(const Triangulation &T, int slot) {
  auto m = flip_slot_map(T, slot);
  int f = slot / 3, s = slot % 3;
  int w = T.partner[slot], f2 = w / 3, s2 = w % 3;
  int P = T.corner[f][s], Q = T.corner[f][(s + 1) % 3], R = T.corner[f][(s + 2) % 3];
  int S = T.corner[f2][(s2 + 2) % 3];
  Triangulation U = T;
  U.corner[f] = {R, P, S};
  U.corner[f2] = {S, Q, R};
  for (int v = 0; v < T.slots(); ++v) {
    if (v == slot || v == w)
      continue;
    U.partner[m[v]] = T.partner[v] < 0 ? -1 : m[T.partner[v]];
  }
  U.partner[3 * f + 2] = 3 * f2 + 2;
  U.partner[3 * f2 + 2] = 3 * f + 2;
  validate(U);
  return U;
}

bool isomorphic(const Triangulation &A, const Triangulation &B, bool labels) {
  if (A.slots() != B.slots() || !(A.surf == B.surf))
    return false;
  int N = A.slots();
  auto rot = [](int v, int k) { return 3 * (v / 3) + (v % 3 + k) % 3; };
  for (int img = 0; img < N; ++img) {
    std::vector<int> m(N, -1), used(N, 0);
    std::vector<int> stack{0};
    m[0] = img;
    used[img] = 1;
    bool ok = true;
    auto assign = [&](int v, int w) {
      if (m[v] < 0) {
        if (used[w])
          return false;
        m[v] = w;
        used[w] = 1;
        stack.push_back(v);
        return true;
      }
      return m[v] == w;
    };
    while (ok && !stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      int w = m[v];
      for (int k = 1; k < 3 && ok; ++k)
        ok = assign(rot(v, k), rot(w, k));
      if (!ok)
        break;
      if ((A.partner[v] < 0) != (B.partner[w] < 0)) {
        ok = false;
        break;
      }
      if (A.partner[v] >= 0)
        ok = assign(A.partner[v], B.partner[w]);
    }
    if (!ok || std::count(m.begin(), m.end(), -1))
      continue;
    if (labels)
      for (int v = 0; v < N && ok; ++v)
        ok = A.b(v) == B.b(m[v]);
    if (ok)
      return true;
  }
  return false;
}

int find_side(const Triangulation &T, int a, int b) {
  for (int v = 0; v < T.slots(); ++v)
    if (T.b(v) == a && T.t(v) == b)
      return v;
  return -1;
}

bool has_arc(const Triangulation &T, int a, int b) {
  return find_side(T, a, b) >= 0 || find_side(T, b, a) >= 0;
}

int Quiver::a3_into(int v) const { return 3 * (v / 3) + (v % 3 + 1) % 3; }
int Quiver::a3_out(int v) const { return v; }

int Quiver::a2_out(int v) const {
  if (T.external(v))
    return -1;
  for (size_t a = T.slots(); a < arrows.size(); ++a)
    if (arrows[a].from == v)
      return int(a);
  return -1;
}

int Quiver::a2_into(int v) const {
  if (T.external(v))
    return -1;
  for (size_t a = T.slots(); a < arrows.size(); ++a)
    if (arrows[a].to == v)
      return int(a);
  return -1;
}

int Quiver::partner_arrow(int a) const {
  const auto &x = arrows.at(a);
  if (x.kind != ArrowKind::A2)
    throw PreconditionError("partner_arrow: not an A2 arrow");
  return a2_out(x.to);
}

Quiver build_quiver(const Triangulation &T) {
  validate(T);
  Quiver q;
  q.T = T;
  for (int f = 0; f < T.faces(); ++f)
    for (int s = 0; s < 3; ++s)
      q.arrows.push_back({3 * f + s, 3 * f + (s + 2) % 3, ArrowKind::A3, f});
  for (int v = 0; v < T.slots(); ++v)
    if (!T.external(v))
      q.arrows.push_back({v, T.partner[v], ArrowKind::A2, -1});
  return q;
}

SpanningData spanning_data(const Quiver &q, int seed) {
  const auto &T = q.T;
  SpanningData sd;
  int nodes = T.n_edges();
  if (seed >= 0 && seed < int(q.arrows.size()) && q.arrows[seed].kind == ArrowKind::A2)
    sd.a0 = seed;
  else if (q.n_a2() > 0)
    sd.a0 = T.slots();
  int start = sd.a0 >= 0 ? T.edge_of(q.arrows[sd.a0].from) : 0;
  std::vector<int> node_of(T.slots());
  for (int v = 0; v < T.slots(); ++v)
    node_of[v] = T.edge_of(v);
  std::vector<char> seen(nodes, 0);
  std::vector<int> queue{start};
  seen[start] = 1;
  std::vector<char> inS(T.slots(), 0);
  for (size_t h = 0; h < queue.size(); ++h) {
    int x = queue[h];
    for (int a = 0; a < T.slots(); ++a) {
      int u = node_of[q.arrows[a].from], w = node_of[q.arrows[a].to];
      int other = u == x ? w : (w == x ? u : -1);
      if (other < 0 || seen[other])
        continue;
      seen[other] = 1;
      inS[a] = 1;
      sd.S.push_back(a);
      queue.push_back(other);
    }
  }
  for (int f = 0; f < T.faces(); ++f) {
    int have = inS[3 * f] + inS[3 * f + 1] + inS[3 * f + 2];
    for (int s = 0; s < 3 && have < 2; ++s)
      if (!inS[3 * f + s]) {
        sd.R.push_back(3 * f + s);
        ++have;
      }
  }
  std::sort(sd.S.begin(), sd.S.end());
  for (int a = T.slots(); a < int(q.arrows.size()); ++a) {
    int b = q.partner_arrow(a);
    if (a == sd.a0 || (b != sd.a0 && q.arrows[a].from < q.arrows[b].from))
      sd.E.push_back(a);
  }
  return sd;
}

std::vector<int> compact_labels(const Triangulation &T) {
  std::set<int> ext;
  for (int v = 0; v < T.slots(); ++v)
    if (T.external(v)) {
      ext.insert(T.b(v));
      ext.insert(T.t(v));
    }
  std::set<int> all;
  for (auto &c : T.corner)
    all.insert(c.begin(), c.end());
  std::vector<int> out;
  for (int l : all)
    if (!ext.count(l))
      out.push_back(l);
  return out;
}

std::vector<int> boundary_cycle(const Quiver &q, int label) {
  const auto &T = q.T;
  int start = -1;
  for (int v = 0; v < T.slots(); ++v)
    if (T.b(v) == label) {
      start = v;
      break;
    }
  if (start < 0)
    throw PreconditionError("boundary_cycle: no such boundary component");
  std::vector<int> out;
  int v = start;
  do {
    int a = q.a3_out(v);
    out.push_back(a);
    v = q.arrows[a].to;
    int c = q.a2_out(v);
    if (c < 0)
      throw PreconditionError("boundary_cycle: component is not compact");
    out.push_back(c);
    v = q.arrows[c].to;
    if (out.size() > 4 * size_t(T.slots()))
      throw NumericalError("boundary_cycle: walk does not close");
  } while (v != start);
  return out;
}

std::vector<int> polygon_order(const Triangulation &T) {
  const auto &S = T.surf;
  if (S.g != 0 || S.k != 1 || S.marks.size() != 1)
    throw PreconditionError("not a polygon triangulation");
  int p = S.marks[0];
  std::map<int, int> next;
  for (int v = 0; v < T.slots(); ++v)
    if (T.external(v))
      next[T.b(v)] = T.t(v);
  std::vector<int> pos(p, -1);
  int x = next.begin()->first;
  for (int i = 0; i < p; ++i) {
    if (x < 0 || x >= p || pos[x] >= 0)
      throw PreconditionError("polygon labels are not 0..p-1");
    pos[x] = i;
    x = next[x];
  }
  return pos;
}

namespace {
struct Chord {
  double x0, y0, x1, y1;
};
// parameter along [a,b] where [c,d] crosses it properly, or NaN
double cross_param(const Chord &a, const Chord &c) {
  double dx = a.x1 - a.x0, dy = a.y1 - a.y0, ex = c.x1 - c.x0, ey = c.y1 - c.y0;
  double den = dx * ey - dy * ex;
  if (std::abs(den) < 1e-12)
    return std::nan("");
  double wx = c.x0 - a.x0, wy = c.y0 - a.y0;
  double t = (wx * ey - wy * ex) / den, u = (wx * dy - wy * dx) / den;
  const double eps = 1e-9;
  if (t <= eps || t >= 1 - eps || u <= eps || u >= 1 - eps)
    return std::nan("");
  return t;
}
} // namespace

std::vector<std::vector<int>> enumerate_zigzag(const Triangulation &T, int i, int j) {
  auto pos = polygon_order(T);
  int p = int(pos.size());
  if (i < 0 || j < 0 || i >= p || j >= p || i == j)
    throw PreconditionError("zigzag: invalid diagonal");
  if (has_arc(T, i, j))
    return {{i, j}};
  const double pi = std::acos(-1.0);
  auto pt = [&](int l, double &x, double &y) {
    double a = 2 * pi * ((pos[l] - pos[i] + p) % p) / p;
    x = std::cos(a);
    y = std::sin(a);
  };
  auto chord = [&](int a, int b) {
    Chord c;
    pt(a, c.x0, c.y0);
    pt(b, c.x1, c.y1);
    return c;
  };
  Chord diag = chord(i, j);
  std::vector<std::vector<int>> out;
  std::vector<int> path{i};
  // odd steps avoid the diagonal, even steps cross it further along
  std::function<void(int, double)> rec = [&](int c, double last) {
    bool odd = path.size() % 2 == 1;
    for (int d = 0; d < p; ++d) {
      if (d == c || !has_arc(T, c, d))
        continue;
      if (odd) {
        if (d == i || !std::isnan(cross_param(diag, chord(c, d))))
          continue;
        if (c == j)
          continue;
        if (d == j) {
          if (c == i)
            continue;
          path.push_back(d);
          out.push_back(path);
          path.pop_back();
          continue;
        }
        path.push_back(d);
        rec(d, last);
        path.pop_back();
      } else {
        double u = cross_param(diag, chord(c, d));
        if (std::isnan(u) || u <= last)
          continue;
        path.push_back(d);
        rec(d, u);
        path.pop_back();
      }
    }
  };
  rec(i, -1.0);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace symp
