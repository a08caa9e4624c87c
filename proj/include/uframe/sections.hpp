#pragma once

#include <json.hpp>

#include "uframe/frame.hpp"
#include "uframe/geometry.hpp"

namespace uframe {

/// The cube section in frame coordinates: the intersection of the slabs
/// |<x, v_i>| <= 1. `active` lists the generator indices whose constraint
/// is tight on some facet.
struct SectionPolytope {
  int k = 0;
  int n = 0;
  std::vector<Vec> vertices;
  std::vector<Facet> facets;
  std::vector<int> polygon;  // k == 2 only: CCW cyclic vertex order
  double volume = 0.0;
  std::vector<int> active;
};

/// Sequentially clips the start box (side 2 * sqrt(n) * 1.01, which contains
/// the section of any certified uframe) by the 2n halfspaces, in index
/// order. k must be 2 or 3.
SectionPolytope cube_section(const UFrame& s);

/// Max deviation of the polarity between hull(s) and cube_section(s):
/// every hull vertex u must satisfy max_w <u, w> = 1 over section vertices
/// w, and vice versa.
double polar_check(const UFrame& s);

struct BoundsReport {
  double vol_section;
  double vaaler;          // lower bound 2^k
  double ball;            // upper bound min{(n/k)^{k/2}, 2^{(n-k)/2}} 2^k
  double mahler_product;  // vol hull(s) * vol section
  bool pass;              // both bounds satisfied within 1e-9
};

BoundsReport bounds_report(const UFrame& s);

nlohmann::json to_json(const BoundsReport& r);

}  // namespace uframe
