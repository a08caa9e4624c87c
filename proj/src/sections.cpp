#include "uframe/sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "uframe/errors.hpp"

namespace uframe {

namespace {

// ---------- k = 2: Sutherland-Hodgman on a CCW polygon ----------

std::vector<Vec> clip_polygon(const std::vector<Vec>& poly, const Vec& a, double b,
                              double tol) {
  // Keep the side <a, x> <= b.
  bool any_outside = false;
  for (const Vec& q : poly)
    if (a.dot(q) - b > tol) any_outside = true;
  if (!any_outside) return poly;

  std::vector<Vec> out;
  const int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % m];
    const double dp = a.dot(p) - b;
    const double dq = a.dot(q) - b;
    const bool pin = dp <= tol;
    const bool qin = dq <= tol;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

// ---------- k = 3: sequential clipping of a convex polyhedron ----------

struct Poly3 {
  // Faces as CCW-from-outside position cycles.
  std::vector<std::vector<Vec>> faces;
};

Poly3 start_box3(double half) {
  const double h = half;
  auto v = [&](double x, double y, double z) {
    Vec p(3);
    p << x, y, z;
    return p;
  };
  Poly3 box;
  box.faces = {
      {v(h, -h, -h), v(h, h, -h), v(h, h, h), v(h, -h, h)},      // +x
      {v(-h, -h, -h), v(-h, -h, h), v(-h, h, h), v(-h, h, -h)},  // -x
      {v(-h, h, -h), v(-h, h, h), v(h, h, h), v(h, h, -h)},      // +y
      {v(-h, -h, -h), v(h, -h, -h), v(h, -h, h), v(-h, -h, h)},  // -y
      {v(-h, -h, h), v(h, -h, h), v(h, h, h), v(-h, h, h)},      // +z
      {v(-h, -h, -h), v(-h, h, -h), v(h, h, -h), v(h, -h, -h)},  // -z
  };
  return box;
}

void clip_poly3(Poly3& poly, const Vec& a, double b, double tol) {
  bool any_outside = false;
  for (const auto& face : poly.faces)
    for (const Vec& q : face)
      if (a.dot(q) - b > tol) any_outside = true;
  if (!any_outside) return;  // no-op clip; also avoids duplicate cap faces

  std::vector<std::vector<Vec>> kept;
  std::vector<Vec> cap_points;
  for (const auto& face : poly.faces) {
    std::vector<Vec> trimmed;
    const int m = static_cast<int>(face.size());
    for (int i = 0; i < m; ++i) {
      const Vec& p = face[i];
      const Vec& q = face[(i + 1) % m];
      const double dp = a.dot(p) - b;
      const double dq = a.dot(q) - b;
      const bool pin = dp <= tol;
      const bool qin = dq <= tol;
      if (pin) trimmed.push_back(p);
      if (pin != qin) {
        const double t = dp / (dp - dq);
        trimmed.push_back(p + t * (q - p));
      }
    }
    for (const Vec& q : trimmed)
      if (std::abs(a.dot(q) - b) <= tol) cap_points.push_back(q);
    if (static_cast<int>(trimmed.size()) >= 3) kept.push_back(std::move(trimmed));
  }

  // Cap face on the cutting plane, ordered around its centroid.
  if (cap_points.size() >= 3) {
    std::vector<Vec> cap;
    for (const Vec& q : cap_points) {
      bool dup = false;
      for (const Vec& r : cap)
        if ((q - r).lpNorm<Eigen::Infinity>() <= tol) dup = true;
      if (!dup) cap.push_back(q);
    }
    if (cap.size() >= 3) {
      Vec centroid = Vec::Zero(3);
      for (const Vec& q : cap) centroid += q;
      centroid /= static_cast<double>(cap.size());
      const Vec n = a / a.norm();
      int axis = 0;
      for (int c = 1; c < 3; ++c)
        if (std::abs(n[c]) < std::abs(n[axis])) axis = c;
      Vec u = Vec::Unit(3, axis) - n[axis] * n;
      u /= u.norm();
      Vec w(3);
      w << n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0];
      std::sort(cap.begin(), cap.end(), [&](const Vec& p, const Vec& q) {
        return std::atan2(w.dot(p - centroid), u.dot(p - centroid)) <
               std::atan2(w.dot(q - centroid), u.dot(q - centroid));
      });
      // CCW around n means CCW seen from outside the kept halfspace.
      kept.push_back(std::move(cap));
    }
  }
  poly.faces = std::move(kept);
}

int find_or_add(std::vector<Vec>& vertices, const Vec& q, double tol) {
  for (std::size_t j = 0; j < vertices.size(); ++j)
    if ((vertices[j] - q).lpNorm<Eigen::Infinity>() <= tol) return static_cast<int>(j);
  vertices.push_back(q);
  return static_cast<int>(vertices.size()) - 1;
}

}  // namespace

SectionPolytope cube_section(const UFrame& s) {
  const int k = s.k();
  const int n = s.n();
  if (k != 2 && k != 3)
    throw DimensionError("cube_section: exact geometry only for k in {2, 3}");

  // |x|^2 = sum <x, v_i>^2 <= n on the section, so the box below contains it.
  const double half = std::sqrt(static_cast<double>(n)) * 1.01;
  const double tol = 1e-10 * half;

  SectionPolytope sec;
  sec.k = k;
  sec.n = n;

  if (k == 2) {
    std::vector<Vec> poly;
    {
      Vec p(2);
      p << half, -half;
      poly.push_back(p);
      p << half, half;
      poly.push_back(p);
      p << -half, half;
      poly.push_back(p);
      p << -half, -half;
      poly.push_back(p);
    }
    for (int i = 0; i < n; ++i) {
      const Vec v = s.vector(i);
      if (v.norm() <= 1e-14) continue;  // vacuous slab
      poly = clip_polygon(poly, v, 1.0, tol);
      poly = clip_polygon(poly, Vec(-v), 1.0, tol);
    }
    if (poly.size() < 3) throw NumericalError("cube_section: empty section");
    // Deduplicate consecutive points, then rebuild the facet records.
    std::vector<Vec> cleaned;
    for (const Vec& q : poly) {
      if (cleaned.empty() || (cleaned.back() - q).lpNorm<Eigen::Infinity>() > tol)
        cleaned.push_back(q);
    }
    while (cleaned.size() > 1 &&
           (cleaned.front() - cleaned.back()).lpNorm<Eigen::Infinity>() <= tol)
      cleaned.pop_back();
    sec.vertices = cleaned;
    const int m = static_cast<int>(cleaned.size());
    for (int j = 0; j < m; ++j) sec.polygon.push_back(j);
    double a2 = 0.0;
    for (int j = 0; j < m; ++j) {
      const Vec& a = cleaned[j];
      const Vec& b = cleaned[(j + 1) % m];
      a2 += a[0] * b[1] - a[1] * b[0];
      Facet f;
      f.cycle = {j, (j + 1) % m};
      Vec d = b - a;
      Vec nrm(2);
      nrm << d[1], -d[0];
      nrm /= nrm.norm();
      f.normal = nrm;
      f.offset = 0.5 * (nrm.dot(a) + nrm.dot(b));
      sec.facets.push_back(std::move(f));
    }
    sec.volume = 0.5 * a2;
  } else {
    Poly3 poly = start_box3(half);
    for (int i = 0; i < n; ++i) {
      const Vec v = s.vector(i);
      if (v.norm() <= 1e-14) continue;
      clip_poly3(poly, v, 1.0, tol);
      clip_poly3(poly, Vec(-v), 1.0, tol);
    }
    // Collect vertices and facet records from the face cycles.
    for (const auto& face : poly.faces) {
      Facet f;
      for (const Vec& q : face) {
        const int id = find_or_add(sec.vertices, q, tol);
        if (f.cycle.empty() || f.cycle.back() != id) f.cycle.push_back(id);
      }
      while (f.cycle.size() > 1 && f.cycle.front() == f.cycle.back()) f.cycle.pop_back();
      if (static_cast<int>(f.cycle.size()) < 3) continue;
      // Newell normal; faces are CCW from outside.
      Vec nrm = Vec::Zero(3);
      const int m = static_cast<int>(f.cycle.size());
      for (int j = 0; j < m; ++j) {
        const Vec& p = sec.vertices[f.cycle[j]];
        const Vec& q = sec.vertices[f.cycle[(j + 1) % m]];
        nrm[0] += (p[1] - q[1]) * (p[2] + q[2]);
        nrm[1] += (p[2] - q[2]) * (p[0] + q[0]);
        nrm[2] += (p[0] - q[0]) * (p[1] + q[1]);
      }
      const double nn = nrm.norm();
      if (nn <= 0.0) continue;
      nrm /= nn;
      double off = 0.0;
      for (int id : f.cycle) off += nrm.dot(sec.vertices[id]);
      off /= static_cast<double>(m);
      if (off < 0.0) {  // orient outward (origin is always interior)
        nrm = -nrm;
        off = -off;
        std::reverse(f.cycle.begin(), f.cycle.end());
      }
      f.normal = nrm;
      f.offset = off;
      sec.facets.push_back(std::move(f));
    }
    double vol = 0.0;
    for (const Facet& f : sec.facets) {
      const Vec& a = sec.vertices[f.cycle[0]];
      double area = 0.0;
      for (std::size_t j = 1; j + 1 < f.cycle.size(); ++j) {
        const Vec u = sec.vertices[f.cycle[j]] - a;
        const Vec w = sec.vertices[f.cycle[j + 1]] - a;
        Vec cr(3);
        cr << u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2],
            u[0] * w[1] - u[1] * w[0];
        area += 0.5 * cr.norm();
      }
      vol += f.offset * area / 3.0;
    }
    sec.volume = vol;
  }

  // Active constraints: facets lying on {<x, v_i> = +-1}.
  std::set<int> active;
  for (const Facet& f : sec.facets) {
    for (int i = 0; i < n; ++i) {
      const Vec v = s.vector(i);
      const double nv = v.norm();
      if (nv <= 1e-14) continue;
      if (std::abs(std::abs(f.normal.dot(v)) - nv) <= 1e-8 * nv &&
          std::abs(f.offset - 1.0 / nv) <= 1e-7 * (1.0 / nv))
        active.insert(i);
    }
  }
  sec.active.assign(active.begin(), active.end());
  return sec;
}

double polar_check(const UFrame& s) {
  const SymPolytope p = hull(s);
  const SectionPolytope q = cube_section(s);
  double dev = 0.0;
  for (const Vec& u : p.vertices) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& w : q.vertices) best = std::max(best, u.dot(w));
    dev = std::max(dev, std::abs(best - 1.0));
  }
  for (const Vec& w : q.vertices) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& u : p.vertices) best = std::max(best, u.dot(w));
    dev = std::max(dev, std::abs(best - 1.0));
  }
  return dev;
}

BoundsReport bounds_report(const UFrame& s) {
  const int k = s.k();
  const int n = s.n();
  if (k != 2 && k != 3) throw DimensionError("bounds_report: k must be 2 or 3");
  const SectionPolytope q = cube_section(s);
  BoundsReport r;
  r.vol_section = q.volume;
  r.vaaler = std::pow(2.0, k);
  r.ball = std::min(std::pow(static_cast<double>(n) / k, 0.5 * k),
                    std::pow(2.0, 0.5 * (n - k))) *
           std::pow(2.0, k);
  r.mahler_product = hull_volume(s) * q.volume;
  r.pass = (r.vol_section >= r.vaaler - 1e-9) && (r.vol_section <= r.ball + 1e-9);
  return r;
}

nlohmann::json to_json(const BoundsReport& r) {
  return nlohmann::json{{"vol_section", r.vol_section},
                        {"vaaler", r.vaaler},
                        {"ball", r.ball},
                        {"pass", r.pass},
                        {"mahler_product", r.mahler_product}};
}

}  // namespace uframe
