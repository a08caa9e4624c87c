#pragma once

#include <json.hpp>

#include "uframe/frame.hpp"
#include "uframe/geometry.hpp"

namespace uframe {

/// n split into k positive parts, nonincreasing.
struct Partition {
  std::vector<int> parts;

  long long product() const;
  int sum() const;
};

/// Extremal constants for (n, k): the projection-volume minimum and the
/// section-volume maximum over subspaces where the projection is an affine
/// cross-polytope (equivalently the section an affine cube). The best
/// partition maximizes the part product; `paper_formula_value` is the
/// closed-form integer ceil(n/k)^(n - k floor(n/k)) floor(n/k)^(rest).
struct ExtremalConstants {
  int n;
  int k;
  Partition best_partition;
  long long product;
  double min_projection_volume;  // (2^k / k!) / sqrt(product)
  double max_section_volume;     // 2^k * sqrt(product)
  long long paper_formula_value;
};

/// Brute-force partition enumeration; n <= 60.
ExtremalConstants constants(int n, int k);

/// The frame attaining the projection minimum: k groups of sizes d_j, group
/// j holding d_j copies of signs_i * e_j / sqrt(d_j). Empty signs means all
/// +1. Its hull is an affine cross-polytope of the minimal volume.
UFrame canonical_min_frame(int n, int k, const std::vector<int>& signs = {});

/// {e_1, ..., e_k, 0, ..., 0}: hull volume 2^k / k!.
UFrame coordinate_max_frame(int n, int k);

/// The (3,2)-uframe of norm sqrt(2/3) vectors at 0, 60 and 120 degrees;
/// its hull is the regular hexagon of volume sqrt(3).
UFrame hexagon_frame();

/// k^3: searches for maximizers never need more than this many vectors.
int search_cap(int k);

struct TCheck {
  double t_boundary;
  double lower;  // x / (sqrt(n-1) sqrt(1-x^2)), x = sqrt(1 - |v|^2)
  double upper;  // x / (1 + x)
  bool pass;
};

/// Diagnostics for the maximizer necessary conditions: per vertex pair the
/// residual | |v|^2 - vol N(v)/vol P |, simpliciality, the belt sum
/// sum vol N(v)/vol P over vertex pairs, and the boundary-parameter test.
struct NecessaryConditionReport {
  std::vector<Vec> vertices;  // one representative per +- pair
  std::vector<double> residuals;
  std::vector<TCheck> t_checks;
  bool simplicial;
  double belt_sum;
  std::vector<int> non_vertex_indices;  // nonzero generators that are not vertices
  bool local_max_pass;                  // simplicial and max residual < tol
  bool t_test_pass;                     // upper >= t >= lower for every |v| < 1
  double tol;
};

NecessaryConditionReport necessary_condition(const UFrame& s, double tol = 1e-9);

nlohmann::json to_json(const Partition& p);
nlohmann::json to_json(const ExtremalConstants& c);
nlohmann::json to_json(const NecessaryConditionReport& r);

}  // namespace uframe
