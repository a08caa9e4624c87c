#include "uframe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "hull_internal.hpp"
#include "uframe/errors.hpp"
#include "uframe/lp.hpp"
#include "uframe/rng.hpp"

namespace uframe {

namespace {

using detail::PointSet;

Vec edge_outward_normal(const Vec& a, const Vec& b) {
  Vec d = b - a;
  Vec n(2);
  n << d[1], -d[0];  // right of the CCW direction
  const double nn = n.norm();
  if (nn <= 0.0) throw NumericalError("degenerate polygon edge");
  return n / nn;
}

SymPolytope build_polytope2(const Frame& s, const PointSet& ps) {
  SymPolytope p;
  p.k = 2;
  p.n = s.n();
  const std::vector<int> cycle = detail::hull2_ccw(ps.pts, ps.scale);
  if (cycle.empty()) throw ConditioningError("hull: generators are collinear");

  std::vector<int> point_to_vertex(ps.pts.size(), -1);
  for (std::size_t j = 0; j < cycle.size(); ++j) {
    point_to_vertex[cycle[j]] = static_cast<int>(j);
    p.vertices.push_back(ps.pts[cycle[j]]);
    p.provenance.push_back(ps.groups[cycle[j]]);
    p.polygon.push_back(static_cast<int>(j));
  }
  p.generator_vertex.resize(2 * p.n);
  for (int g = 0; g < 2 * p.n; ++g)
    p.generator_vertex[g] = point_to_vertex[ps.gen_to_point[g]];

  const int m = static_cast<int>(p.vertices.size());
  for (int j = 0; j < m; ++j) {
    const Vec& a = p.vertices[j];
    const Vec& b = p.vertices[(j + 1) % m];
    Facet f;
    f.cycle = {j, (j + 1) % m};
    f.normal = edge_outward_normal(a, b);
    f.offset = 0.5 * (f.normal.dot(a) + f.normal.dot(b));
    if (f.offset <= 0.0) throw NumericalError("hull: origin not interior");
    p.facets.push_back(std::move(f));
  }
  p.volume = detail::polygon_area(ps.pts, cycle);
  return p;
}

SymPolytope build_polytope3(const Frame& s, const PointSet& ps) {
  SymPolytope p;
  p.k = 3;
  p.n = s.n();
  const detail::Hull3 h = detail::hull3(ps.pts, ps.scale, /*full_structure=*/true);
  if (h.degenerate) throw ConditioningError("hull: generators do not span R^3");

  std::vector<int> point_to_vertex(ps.pts.size(), -1);
  for (std::size_t q = 0; q < ps.pts.size(); ++q) {
    if (!h.is_vertex[q]) continue;
    point_to_vertex[q] = static_cast<int>(p.vertices.size());
    p.vertices.push_back(ps.pts[q]);
    p.provenance.push_back(ps.groups[q]);
  }
  p.generator_vertex.resize(2 * p.n);
  for (int g = 0; g < 2 * p.n; ++g)
    p.generator_vertex[g] = point_to_vertex[ps.gen_to_point[g]];

  for (const auto& face : h.faces) {
    Facet f;
    for (int q : face.cycle) f.cycle.push_back(point_to_vertex[q]);
    f.normal = face.normal;
    f.offset = face.offset;
    if (f.offset <= 0.0) throw NumericalError("hull: origin not interior");
    p.facets.push_back(std::move(f));
  }
  p.volume = h.volume;

  // Structural sanity: Euler relation and facet-fan volume agreement.
  std::set<std::pair<int, int>> edges;
  for (const Facet& f : p.facets) {
    const int c = static_cast<int>(f.cycle.size());
    for (int j = 0; j < c; ++j) {
      const int a = f.cycle[j], b = f.cycle[(j + 1) % c];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  const long v_count = static_cast<long>(p.vertices.size());
  const long e_count = static_cast<long>(edges.size());
  const long f_count = static_cast<long>(p.facets.size());
  if (v_count - e_count + f_count != 2)
    throw NumericalError("hull: Euler relation violated");
  return p;
}

double facet_cone_volume(const SymPolytope& p, const Facet& f) {
  if (p.k == 2) {
    const Vec& a = p.vertices[f.cycle[0]];
    const Vec& b = p.vertices[f.cycle[1]];
    return 0.5 * std::abs(a[0] * b[1] - a[1] * b[0]);
  }
  // Planar convex polygon area, fanned from its first vertex.
  double area = 0.0;
  const Vec& a = p.vertices[f.cycle[0]];
  for (std::size_t j = 1; j + 1 < f.cycle.size(); ++j) {
    const Vec u = p.vertices[f.cycle[j]] - a;
    const Vec w = p.vertices[f.cycle[j + 1]] - a;
    Vec cr(3);
    cr << u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0];
    area += 0.5 * cr.norm();
  }
  return f.offset * area / 3.0;
}

int find_vertex(const SymPolytope& p, const Vec& v, double scale) {
  if (v.size() != p.k) throw PreconditionError("vertex query has wrong dimension");
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.vertices.size(); ++j) {
    const double d = (p.vertices[j] - v).lpNorm<Eigen::Infinity>();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  if (best < 0 || best_d > 1e-8 * std::max(scale, 1.0))
    throw NotAVertexError("queried point is not a vertex of the polytope");
  return best;
}

/// Lexicographically larger of v and -v; makes derived quantities for a
/// vertex and its negation bit-identical.
Vec canonical_direction(const Vec& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] > -v[i]) return v;
    if (v[i] < -v[i]) return -v;
  }
  return v;
}

struct RestData {
  std::vector<Vec> pts;
  bool degenerate = true;
  double volume = 0.0;
  std::vector<std::pair<Vec, double>> planes;  // (outward unit normal, offset)
};

/// Hull of the generators excluding those merged into vertex `vid` or its
/// negation.
RestData rest_of_vertex(const SymPolytope& p, int vid, const Frame& s, double scale) {
  std::set<int> excluded;
  for (const auto& [i, sgn] : p.provenance[vid]) {
    (void)sgn;
    excluded.insert(i);
  }
  RestData rest;
  for (int i = 0; i < s.n(); ++i) {
    if (excluded.count(i)) continue;
    rest.pts.push_back(s.vector(i));
    rest.pts.push_back(-s.vector(i));
  }
  if (rest.pts.empty()) return rest;

  if (p.k == 2) {
    const std::vector<int> cycle = detail::hull2_ccw(rest.pts, scale);
    if (cycle.empty()) return rest;
    rest.degenerate = false;
    rest.volume = detail::polygon_area(rest.pts, cycle);
    const int m = static_cast<int>(cycle.size());
    for (int j = 0; j < m; ++j) {
      const Vec& a = rest.pts[cycle[j]];
      const Vec& b = rest.pts[cycle[(j + 1) % m]];
      const Vec nrm = edge_outward_normal(a, b);
      rest.planes.push_back({nrm, 0.5 * (nrm.dot(a) + nrm.dot(b))});
    }
  } else {
    const detail::Hull3 h = detail::hull3(rest.pts, scale, /*full_structure=*/true);
    if (h.degenerate) return rest;
    rest.degenerate = false;
    rest.volume = h.volume;
    for (const auto& f : h.faces) rest.planes.push_back({f.normal, f.offset});
  }
  return rest;
}

}  // namespace

SymPolytope hull(const Frame& s) {
  if (s.k() != 2 && s.k() != 3)
    throw DimensionError("hull: exact geometry only for k in {2, 3}");
  const PointSet ps = detail::merge_signed_points(s.matrix());
  return s.k() == 2 ? build_polytope2(s, ps) : build_polytope3(s, ps);
}

double hull_volume(const Frame& s) {
  if (s.k() != 2 && s.k() != 3)
    throw DimensionError("hull_volume: exact geometry only for k in {2, 3}");
  const PointSet ps = detail::merge_signed_points(s.matrix());
  const double v = detail::hull_volume_points(ps.pts, s.k(), ps.scale);
  if (v <= 0.0) throw ConditioningError("hull_volume: degenerate generator set");
  return v;
}

double volume(const SymPolytope& p) { return p.volume; }

StarDecomposition star_belt_rest(const SymPolytope& p, const Vec& v, const Frame& s) {
  if (p.k != 2 && p.k != 3) throw DimensionError("star_belt_rest: k must be 2 or 3");
  const PointSet ps = detail::merge_signed_points(s.matrix());
  const int vid = find_vertex(p, v, ps.scale);
  const int nvid = find_vertex(p, Vec(-p.vertices[vid]), ps.scale);

  StarDecomposition out;
  out.vertex = p.vertices[vid];
  out.vol_star = 0.0;
  out.vol_belt = 0.0;
  for (const Facet& f : p.facets) {
    const bool incident =
        std::find(f.cycle.begin(), f.cycle.end(), vid) != f.cycle.end() ||
        std::find(f.cycle.begin(), f.cycle.end(), nvid) != f.cycle.end();
    (incident ? out.vol_star : out.vol_belt) += facet_cone_volume(p, f);
  }

  const RestData rest = rest_of_vertex(p, vid, s, ps.scale);
  if (rest.degenerate) {
    out.vol_rest = 0.0;
    out.t_boundary = 0.0;
    return out;
  }
  out.vol_rest = rest.volume;
  const Vec w = canonical_direction(p.vertices[vid]);
  double t = std::numeric_limits<double>::infinity();
  for (const auto& [nrm, off] : rest.planes) {
    const double along = nrm.dot(w);
    if (along > 1e-12) t = std::min(t, off / along);
  }
  if (!std::isfinite(t)) throw NumericalError("star_belt_rest: unbounded rest ray");
  out.t_boundary = std::clamp(t, 0.0, 1.0);
  return out;
}

double LambdaProfile::eval(double lambda) const {
  if (breakpoints.empty()) return 0.0;
  if (lambda <= breakpoints.front()) return values.front();
  if (lambda >= breakpoints.back()) return values.back();
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (lambda <= breakpoints[i + 1]) {
      const double f = (lambda - breakpoints[i]) / (breakpoints[i + 1] - breakpoints[i]);
      return values[i] + f * (values[i + 1] - values[i]);
    }
  }
  return values.back();
}

LambdaProfile lambda_profile(const SymPolytope& p, const Vec& v, const Frame& s,
                             double lambda_max) {
  if (p.k != 2 && p.k != 3) throw DimensionError("lambda_profile: k must be 2 or 3");
  if (!(lambda_max > 1.0)) throw PreconditionError("lambda_profile: lambda_max must exceed 1");
  const PointSet ps = detail::merge_signed_points(s.matrix());
  const int vid = find_vertex(p, v, ps.scale);
  const Vec w = canonical_direction(p.vertices[vid]);

  const RestData rest = rest_of_vertex(p, vid, s, ps.scale);
  std::vector<double> cuts;
  if (!rest.degenerate) {
    for (const auto& [nrm, off] : rest.planes) {
      const double along = nrm.dot(w);
      if (along > 1e-12) {
        const double t = off / along;
        if (t > 1e-12 && t < lambda_max * (1.0 - 1e-12)) cuts.push_back(t);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  LambdaProfile prof;
  prof.breakpoints.push_back(0.0);
  for (double t : cuts) {
    if (t - prof.breakpoints.back() > 1e-9 * std::max(1.0, lambda_max))
      prof.breakpoints.push_back(t);
  }
  prof.breakpoints.push_back(lambda_max);

  for (double b : prof.breakpoints) {
    if (b == 0.0) {
      prof.values.push_back(rest.degenerate ? 0.0 : rest.volume);
      continue;
    }
    std::vector<Vec> pts = rest.pts;
    pts.push_back(b * w);
    pts.push_back(-b * w);
    prof.values.push_back(
        detail::hull_volume_points(pts, p.k, std::max(ps.scale, b * w.norm())));
  }
  for (std::size_t i = 0; i + 1 < prof.breakpoints.size(); ++i)
    prof.slopes.push_back((prof.values[i + 1] - prof.values[i]) /
                          (prof.breakpoints[i + 1] - prof.breakpoints[i]));
  return prof;
}

bool is_simplicial(const SymPolytope& p) {
  for (const Facet& f : p.facets)
    if (static_cast<int>(f.cycle.size()) != p.k) return false;
  return true;
}

double gauge_l1(const Frame& s, const Vec& x) {
  if (x.size() != s.k()) throw PreconditionError("gauge_l1: wrong query dimension");
  const int n = s.n();
  Mat a(s.k(), 2 * n);
  a.leftCols(n) = s.matrix();
  a.rightCols(n) = -s.matrix();
  const SimplexResult r = simplex_min(a, x, Vec::Ones(2 * n));
  return r.objective;
}

McEstimate mc_volume(const Frame& s, long samples, std::uint64_t seed) {
  if (samples < 1000) throw PreconditionError("mc_volume: need at least 1000 samples");
  double r = 0.0;
  for (int i = 0; i < s.n(); ++i) r = std::max(r, s.vector(i).norm());
  const int k = s.k();
  DetRng rng(seed);
  long hits = 0;
  Vec x(k);
  for (long it = 0; it < samples; ++it) {
    for (int c = 0; c < k; ++c) x[c] = rng.uniform(-r, r);
    if (gauge_l1(s, x) <= 1.0 + 1e-12) ++hits;
  }
  const double box = std::pow(2.0 * r, k);
  const double p_hat = static_cast<double>(hits) / static_cast<double>(samples);
  McEstimate est;
  est.estimate = box * p_hat;
  est.std_error = box * std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat) /
                                                    static_cast<double>(samples)));
  est.hits = hits;
  est.samples = samples;
  return est;
}

namespace {

std::string fmt6(double x) {
  char buf[64];
  if (x == 0.0) x = 0.0;  // normalize -0
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

std::string polytope_svg(const SymPolytope& p, const Frame& s, int shade_star) {
  if (p.k != 2) throw DimensionError("polytope_svg: only k = 2");
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.2 -1.2 2.4 2.4\" "
         "width=\"480\" height=\"480\">\n";
  svg << "<rect x=\"-1.2\" y=\"-1.2\" width=\"2.4\" height=\"2.4\" fill=\"#ffffff\"/>\n";
  svg << "<g transform=\"scale(1,-1)\">\n";

  svg << "<polygon points=\"";
  for (std::size_t j = 0; j < p.polygon.size(); ++j) {
    const Vec& q = p.vertices[p.polygon[j]];
    svg << (j ? " " : "") << fmt6(q[0]) << "," << fmt6(q[1]);
  }
  svg << "\" fill=\"#dbe7f6\" stroke=\"none\"/>\n";

  if (shade_star >= 0) {
    if (shade_star >= p.n) throw PreconditionError("shade-star index out of range");
    const int vid = p.generator_vertex[2 * shade_star];
    if (vid < 0) throw NotAVertexError("shade-star generator is not a vertex");
    const int nvid = p.generator_vertex[2 * shade_star + 1];
    for (const Facet& f : p.facets) {
      const bool incident =
          std::find(f.cycle.begin(), f.cycle.end(), vid) != f.cycle.end() ||
          std::find(f.cycle.begin(), f.cycle.end(), nvid) != f.cycle.end();
      if (!incident) continue;
      const Vec& a = p.vertices[f.cycle[0]];
      const Vec& b = p.vertices[f.cycle[1]];
      svg << "<polygon points=\"0.000000,0.000000 " << fmt6(a[0]) << "," << fmt6(a[1])
          << " " << fmt6(b[0]) << "," << fmt6(b[1]) << "\" fill=\"#f4c97e\"/>\n";
    }
  }

  svg << "<polygon points=\"";
  for (std::size_t j = 0; j < p.polygon.size(); ++j) {
    const Vec& q = p.vertices[p.polygon[j]];
    svg << (j ? " " : "") << fmt6(q[0]) << "," << fmt6(q[1]);
  }
  svg << "\" fill=\"none\" stroke=\"#2f5f8f\" stroke-width=\"0.015\"/>\n";

  for (int i = 0; i < s.n(); ++i) {
    const Vec q = s.vector(i);
    svg << "<circle cx=\"" << fmt6(q[0]) << "\" cy=\"" << fmt6(q[1])
        << "\" r=\"0.025\" fill=\"#283136\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace uframe
