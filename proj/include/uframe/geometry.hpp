#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uframe/frame.hpp"

namespace uframe {

/// One facet: vertex ids in counterclockwise order seen from outside,
/// outward unit normal, and offset (> 0, the origin is interior).
struct Facet {
  std::vector<int> cycle;
  Vec normal;
  double offset;
};

/// The centrally symmetric polytope co{+-v_1, ..., +-v_n} with full
/// vertex/facet structure (k = 2 or 3).
///
/// Generators are addressed as (index, sign); `generator_vertex` maps the
/// signed generator 2*i + (sign < 0) to its vertex id, or -1 when the point
/// is not a vertex (interior, or merged away as a duplicate of nothing).
/// `provenance[v]` lists the signed generators that coincide with vertex v.
struct SymPolytope {
  int k = 0;
  int n = 0;
  std::vector<Vec> vertices;
  std::vector<std::vector<std::pair<int, int>>> provenance;
  std::vector<int> generator_vertex;
  std::vector<Facet> facets;
  std::vector<int> polygon;  // k == 2 only: CCW cyclic vertex order
  double volume = 0.0;
};

/// Convex hull of {+-v_i}. Coincident points are merged at a relative
/// tolerance of 1e-10. Throws DimensionError unless k is 2 or 3.
SymPolytope hull(const Frame& s);

/// Volume of hull(s) without building the facet structure.
double hull_volume(const Frame& s);

double volume(const SymPolytope& p);

/// Star, belt and rest of a vertex: the star collects the cones over the
/// facets incident to v or -v, the belt is the remainder of P, and the rest
/// is the hull of the generators excluding +-v. t_boundary is the largest t
/// with t*v inside the rest (0 when the rest is lower-dimensional).
struct StarDecomposition {
  Vec vertex;
  double vol_star;
  double vol_belt;
  double vol_rest;
  double t_boundary;
};

StarDecomposition star_belt_rest(const SymPolytope& p, const Vec& v, const Frame& s);

/// vol co{rest, +-lambda v} as a piecewise linear convex function of lambda
/// on [0, lambda_max].
struct LambdaProfile {
  std::vector<double> breakpoints;  // increasing; first 0, last lambda_max
  std::vector<double> values;       // profile value at each breakpoint
  std::vector<double> slopes;       // one per segment

  double eval(double lambda) const;
};

LambdaProfile lambda_profile(const SymPolytope& p, const Vec& v, const Frame& s,
                             double lambda_max);

/// True iff every facet has exactly k vertices.
bool is_simplicial(const SymPolytope& p);

/// Minimal sum |lambda_i| with sum lambda_i v_i = x (dense simplex on the
/// split lambda = lambda+ - lambda-). x lies in hull(s) iff the value is
/// at most 1.
double gauge_l1(const Frame& s, const Vec& x);

struct McEstimate {
  double estimate;
  double std_error;
  long hits;
  long samples;
};

/// Hit-or-miss Monte Carlo volume over the bounding box [-r, r]^k with
/// r = max |v_i|; membership via gauge_l1. Works in any dimension.
McEstimate mc_volume(const Frame& s, long samples, std::uint64_t seed);

/// Deterministic SVG of a k = 2 polytope: the polygon, the generator
/// points, and optionally the star of generator `shade_star` shaded.
/// viewBox is fixed to [-1.2, 1.2]^2.
std::string polytope_svg(const SymPolytope& p, const Frame& s, int shade_star = -1);

}  // namespace uframe
