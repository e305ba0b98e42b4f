#pragma once
// helpers shared by the unit tests and the acceptance binary

#include "symp/surface.hpp"
#include "symp/xcoords.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace symp {

// literal check of the definition over all vertex tuples
inline std::vector<std::vector<int>> zigzag_oracle(const Triangulation &T, int i, int j,
                                                   int max_len) {
  auto pos = polygon_order(T);
  int p = int(pos.size());
  auto at = [&](int l) { return (pos[l] - pos[i] + p) % p; };
  const double pi = std::acos(-1.0);
  auto P = [&](int l) {
    double a = 2 * pi * at(l) / p;
    return std::pair<double, double>(std::cos(a), std::sin(a));
  };
  // chords meet iff they share an endpoint or interleave on the circle
  auto inside = [&](int x, int a, int b) {
    int A = at(a), B = at(b), X = at(x);
    if (A > B)
      std::swap(A, B);
    return A < X && X < B;
  };
  auto interleave = [&](int a, int b, int c, int d) {
    if (a == c || a == d || b == c || b == d)
      return false;
    return inside(c, a, b) != inside(d, a, b);
  };
  auto param = [&](int c, int d) {
    auto [x0, y0] = P(i);
    auto [x1, y1] = P(j);
    auto [u0, w0] = P(c);
    auto [u1, w1] = P(d);
    // solve x0 + t(x1-x0) = u0 + s(u1-u0)
    double a11 = x1 - x0, a12 = -(u1 - u0), a21 = y1 - y0, a22 = -(w1 - w0);
    double det = a11 * a22 - a12 * a21;
    return ((u0 - x0) * a22 - a12 * (w0 - y0)) / det;
  };
  std::vector<std::vector<int>> out;
  for (int L = 1; L <= max_len; L += 2) {
    std::vector<int> t(L + 1, 0);
    t[0] = i;
    t[L] = j;
    long total = 1;
    for (int x = 1; x < L; ++x)
      total *= p;
    for (long code = 0; code < total; ++code) {
      long c = code;
      for (int x = 1; x < L; ++x) {
        t[x] = int(c % p);
        c /= p;
      }
      bool ok = true;
      double last = -1;
      for (int l = 1; l <= L && ok; ++l) {
        int a = t[l - 1], b = t[l];
        if (a == b || !has_arc(T, a, b)) {
          ok = false;
          break;
        }
        if (l % 2 == 1) {
          if (L == 1)
            break;
          std::set<int> shared;
          for (int x : {a, b})
            if (x == i || x == j)
              shared.insert(x);
          bool allowed = shared.empty() || (shared.size() == 1 && ((l == 1 && a == i && shared.count(i)) ||
                                                                   (l == L && b == j && shared.count(j))));
          ok = allowed && !interleave(a, b, i, j);
        } else {
          ok = interleave(a, b, i, j);
          if (ok) {
            double u = param(a, b);
            ok = u > last;
            last = u;
          }
        }
      }
      if (ok)
        out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// tree-normalized data on the torus with prescribed edge logs and R elements
inline XPlus sp4_data(const Quiver &q, const SpanningData &sd, const std::vector<Mat> &logs,
                      const std::vector<Mat> &rs) {
  XPlus x;
  x.n = 2;
  x.x.assign(q.arrows.size(), Mat());
  for (size_t i = 0; i < sd.E.size(); ++i) {
    x.x[sd.E[i]] = sym_exp(logs[i]);
    x.x[q.partner_arrow(sd.E[i])] = x.x[sd.E[i]];
  }
  std::set<int> S(sd.S.begin(), sd.S.end());
  std::map<int, Mat> R;
  for (size_t i = 0; i < sd.R.size(); ++i)
    R[sd.R[i]] = rs[i];
  for (int f = 0; f < q.T.faces(); ++f) {
    auto c = face_cycle(q, f);
    int missing = -1;
    for (int i = 0; i < 3; ++i) {
      if (S.count(c[i]))
        x.x[c[i]] = Mat::Identity(2, 2);
      else if (R.count(c[i]))
        x.x[c[i]] = R[c[i]];
      else
        missing = i;
    }
    if (missing < 0)
      throw std::logic_error("face fully covered by S and R");
    if (missing == 0)
      x.x[c[0]] = (x.x[c[2]] * x.x[c[1]]).transpose();
    else if (missing == 1)
      x.x[c[1]] = x.x[c[2]].transpose() * x.x[c[0]].transpose();
    else
      x.x[c[2]] = (x.x[c[1]] * x.x[c[0]]).transpose();
  }
  return x;
}

inline Mat chart(double t, double a, double b) {
  Mat m(2, 2);
  m << t + a, b, b, t - a;
  return m;
}

} // namespace symp
