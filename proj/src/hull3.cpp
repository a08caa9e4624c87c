#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "hull_internal.hpp"
#include "uframe/errors.hpp"

namespace uframe::detail {

namespace {

// Double-double arithmetic; enough headroom that orientation signs are
// reliable down to the point separations the merge tolerance allows.
struct DD {
  double hi, lo;
};

inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}
inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}
inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}
inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}
inline DD dd_sub(DD a, DD b) { return dd_add(a, {-b.hi, -b.lo}); }
inline DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

/// det [b-a; c-a; d-a] evaluated in double-double. Positive when d lies on
/// the side of triangle (a,b,c) that its right-handed normal points to.
double orient3d(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  DD u[3], v[3], w[3];
  for (int i = 0; i < 3; ++i) {
    u[i] = two_sum(b[i], -a[i]);
    v[i] = two_sum(c[i], -a[i]);
    w[i] = two_sum(d[i], -a[i]);
  }
  const DD m0 = dd_sub(dd_mul(v[1], w[2]), dd_mul(v[2], w[1]));
  const DD m1 = dd_sub(dd_mul(v[0], w[2]), dd_mul(v[2], w[0]));
  const DD m2 = dd_sub(dd_mul(v[0], w[1]), dd_mul(v[1], w[0]));
  return dd_add(dd_sub(dd_mul(u[0], m0), dd_mul(u[1], m1)), dd_mul(u[2], m2)).hi;
}

struct Tri {
  int a, b, c;
  bool alive = true;
};

struct Builder {
  const std::vector<Vec>& pts;
  double band;  // coplanarity band for orientation values
  std::vector<Tri> tris;

  double orient(const Tri& t, int p) const {
    return orient3d(pts[t.a], pts[t.b], pts[t.c], pts[p]);
  }

  std::map<std::pair<int, int>, int> edge_map() const {
    std::map<std::pair<int, int>, int> em;
    for (std::size_t f = 0; f < tris.size(); ++f) {
      if (!tris[f].alive) continue;
      const Tri& t = tris[f];
      em[{t.a, t.b}] = static_cast<int>(f);
      em[{t.b, t.c}] = static_cast<int>(f);
      em[{t.c, t.a}] = static_cast<int>(f);
    }
    return em;
  }

  void insert(int p) {
    std::vector<double> dist(tris.size(), 0.0);
    double dmax = -1.0;
    int seed = -1;
    for (std::size_t f = 0; f < tris.size(); ++f) {
      if (!tris[f].alive) continue;
      dist[f] = orient(tris[f], p);
      if (dist[f] > dmax) {
        dmax = dist[f];
        seed = static_cast<int>(f);
      }
    }
    if (dmax <= band) return;  // inside or on the current hull

    const auto em = edge_map();
    std::vector<char> visible(tris.size(), 0);
    std::vector<int> stack{seed};
    visible[seed] = 1;
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      const Tri& t = tris[f];
      const std::pair<int, int> edges[3] = {{t.b, t.a}, {t.c, t.b}, {t.a, t.c}};
      for (const auto& e : edges) {
        const auto it = em.find(e);
        if (it == em.end()) throw NumericalError("hull3: broken adjacency");
        const int g = it->second;
        if (visible[g]) continue;
        if (dist[g] >= -band) {  // strictly visible or coplanar with p
          visible[g] = 1;
          stack.push_back(g);
        }
      }
    }

    // Horizon edges, each spawning the cone triangle (u, v, p).
    std::vector<std::array<int, 2>> horizon;
    for (std::size_t f = 0; f < tris.size(); ++f) {
      if (!tris[f].alive || !visible[f]) continue;
      const Tri& t = tris[f];
      const std::pair<int, int> edges[3] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
      for (const auto& [u, v] : edges) {
        const auto it = em.find({v, u});
        if (it == em.end()) throw NumericalError("hull3: broken adjacency");
        if (!visible[it->second]) horizon.push_back({u, v});
      }
    }
    for (std::size_t f = 0; f < tris.size(); ++f)
      if (visible[f]) tris[f].alive = false;
    for (const auto& [u, v] : horizon) tris.push_back({u, v, p, true});
  }
};

double tetra_volume6(const Vec& a, const Vec& b, const Vec& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Vec cross_p(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return c;
}

/// Greedy rank of a set of unit normals with a fixed angular tolerance.
int normal_rank(const std::vector<Vec>& normals) {
  constexpr double tol = 1e-6;
  if (normals.empty()) return 0;
  Vec c2;
  bool have_pair = false;
  for (const Vec& n : normals) {
    const Vec cr = cross_p(normals[0], n);
    if (cr.norm() > tol) {
      c2 = cr;
      have_pair = true;
      break;
    }
  }
  if (!have_pair) return 1;
  for (const Vec& n : normals)
    if (std::abs(c2.dot(n)) > tol * c2.norm()) return 3;
  return 2;
}

}  // namespace

Hull3 hull3(const std::vector<Vec>& pts, double scale, bool full_structure) {
  Hull3 out;
  const int m = static_cast<int>(pts.size());
  out.is_vertex.assign(m, 0);
  if (m < 4) {
    out.degenerate = true;
    return out;
  }
  const double band = 1e-12 * scale * scale * scale;

  // Initial simplex: lexicographic anchor, then greedy extent.
  int i0 = 0;
  for (int i = 1; i < m; ++i) {
    for (int c = 0; c < 3; ++c) {
      if (pts[i][c] < pts[i0][c]) {
        i0 = i;
        break;
      }
      if (pts[i][c] > pts[i0][c]) break;
    }
  }
  int i1 = -1;
  double best = -1.0;
  for (int i = 0; i < m; ++i) {
    if (i == i0) continue;
    const double d = (pts[i] - pts[i0]).norm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (best <= 1e-12 * scale) {
    out.degenerate = true;
    return out;
  }
  int i2 = -1;
  best = -1.0;
  for (int i = 0; i < m; ++i) {
    if (i == i0 || i == i1) continue;
    const double d = cross_p(pts[i1] - pts[i0], pts[i] - pts[i0]).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0 || best <= 1e-12 * scale * scale) {
    out.degenerate = true;
    return out;
  }
  int i3 = -1;
  best = -1.0;
  for (int i = 0; i < m; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    const double d = std::abs(orient3d(pts[i0], pts[i1], pts[i2], pts[i]));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0 || best <= band) {
    out.degenerate = true;
    return out;
  }

  Builder builder{pts, band, {}};
  const Vec g = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
  const int tet[4][3] = {{i0, i1, i2}, {i0, i1, i3}, {i0, i2, i3}, {i1, i2, i3}};
  for (const auto& f : tet) {
    Tri t{f[0], f[1], f[2], true};
    if (orient3d(pts[t.a], pts[t.b], pts[t.c], g) > 0.0) std::swap(t.b, t.c);
    builder.tris.push_back(t);
  }

  std::vector<int> order;
  for (int i = 0; i < m; ++i)
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double na = pts[a].norm(), nb = pts[b].norm();
    if (na != nb) return na > nb;
    return a < b;
  });
  for (int p : order) builder.insert(p);

  // Every point must end up inside (up to a loose band) of every face.
  const double post_band = 1e-9 * std::max(1.0, scale * scale * scale);
  for (const Tri& t : builder.tris) {
    if (!t.alive) continue;
    for (int p = 0; p < m; ++p)
      if (orient3d(pts[t.a], pts[t.b], pts[t.c], pts[p]) > post_band)
        throw NumericalError("hull3: construction left a point outside");
  }

  double vol6 = 0.0;
  for (const Tri& t : builder.tris)
    if (t.alive) vol6 += tetra_volume6(pts[t.a], pts[t.b], pts[t.c]);
  out.volume = vol6 / 6.0;

  std::vector<char> on_hull(m, 0);
  for (const Tri& t : builder.tris) {
    if (!t.alive) continue;
    on_hull[t.a] = on_hull[t.b] = on_hull[t.c] = 1;
  }

  if (!full_structure) {
    out.is_vertex = on_hull;  // triangulation corners; good enough for volume users
    return out;
  }

  // Merge coplanar adjacent triangles into facet components.
  std::vector<int> alive_ids;
  for (std::size_t f = 0; f < builder.tris.size(); ++f)
    if (builder.tris[f].alive) alive_ids.push_back(static_cast<int>(f));
  const auto em = builder.edge_map();
  const double merge_band = 1e-9 * std::max(1.0, scale * scale * scale);
  auto opposite = [&](const Tri& t, int u, int v) {
    if (t.a != u && t.a != v) return t.a;
    if (t.b != u && t.b != v) return t.b;
    return t.c;
  };
  std::map<int, int> component;  // tri id -> component id
  int ncomp = 0;
  for (int f : alive_ids) {
    if (component.count(f)) continue;
    const int comp = ncomp++;
    std::vector<int> stack{f};
    component[f] = comp;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const Tri& t = builder.tris[cur];
      const std::pair<int, int> edges[3] = {{t.b, t.a}, {t.c, t.b}, {t.a, t.c}};
      for (const auto& e : edges) {
        const int nb = em.at(e);
        if (component.count(nb)) continue;
        const Tri& s = builder.tris[nb];
        const int opp = opposite(s, e.first, e.second);
        if (std::abs(orient3d(pts[t.a], pts[t.b], pts[t.c], pts[opp])) <= merge_band) {
          component[nb] = comp;
          stack.push_back(nb);
        }
      }
    }
  }

  // Fit one plane per component (area-weighted normal, mean offset).
  std::vector<Vec> comp_normal(ncomp, Vec::Zero(3));
  std::vector<std::vector<int>> comp_points(ncomp);
  for (const auto& [f, comp] : component) {
    const Tri& t = builder.tris[f];
    comp_normal[comp] += cross_p(pts[t.b] - pts[t.a], pts[t.c] - pts[t.a]);
    for (int p : {t.a, t.b, t.c}) comp_points[comp].push_back(p);
  }
  std::vector<double> comp_offset(ncomp, 0.0);
  for (int c = 0; c < ncomp; ++c) {
    auto& cp = comp_points[c];
    std::sort(cp.begin(), cp.end());
    cp.erase(std::unique(cp.begin(), cp.end()), cp.end());
    const double nn = comp_normal[c].norm();
    if (nn <= 0.0) throw NumericalError("hull3: degenerate facet normal");
    comp_normal[c] /= nn;
    double s = 0.0;
    for (int p : cp) s += comp_normal[c].dot(pts[p]);
    comp_offset[c] = s / static_cast<double>(cp.size());
  }

  // A point is a vertex iff its incident facet normals span all of R^3.
  const double inc_band = 1e-8 * std::max(scale, 1e-300);
  std::vector<std::vector<int>> incident(m);
  for (int c = 0; c < ncomp; ++c)
    for (int p : comp_points[c])
      if (std::abs(comp_normal[c].dot(pts[p]) - comp_offset[c]) <= inc_band)
        incident[p].push_back(c);
  for (int p = 0; p < m; ++p) {
    if (!on_hull[p] || incident[p].size() < 3) continue;
    std::vector<Vec> normals;
    for (int c : incident[p]) normals.push_back(comp_normal[c]);
    if (normal_rank(normals) >= 3) out.is_vertex[p] = 1;
  }

  // Facet cycles: angular order of the component's true vertices.
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> verts;
    for (int p : comp_points[c])
      if (out.is_vertex[p]) verts.push_back(p);
    if (static_cast<int>(verts.size()) < 3)
      throw NumericalError("hull3: facet with fewer than 3 vertices");
    Vec centroid = Vec::Zero(3);
    for (int p : verts) centroid += pts[p];
    centroid /= static_cast<double>(verts.size());
    const Vec& nrm = comp_normal[c];
    int axis = 0;
    for (int a = 1; a < 3; ++a)
      if (std::abs(nrm[a]) < std::abs(nrm[axis])) axis = a;
    Vec u = Vec::Unit(3, axis) - nrm[axis] * nrm;
    u /= u.norm();
    const Vec w = cross_p(nrm, u);
    std::sort(verts.begin(), verts.end(), [&](int p, int q) {
      const double ap = std::atan2(w.dot(pts[p] - centroid), u.dot(pts[p] - centroid));
      const double aq = std::atan2(w.dot(pts[q] - centroid), u.dot(pts[q] - centroid));
      if (ap != aq) return ap < aq;
      return p < q;
    });
    const auto mn = std::min_element(verts.begin(), verts.end());
    std::rotate(verts.begin(), mn, verts.end());
    out.faces.push_back({std::move(verts), nrm, comp_offset[c]});
  }

  return out;
}

}  // namespace uframe::detail
