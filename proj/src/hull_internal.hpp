#pragma once

#include <utility>
#include <vector>

#include "uframe/linalg.hpp"

namespace uframe::detail {

/// Signed generator points merged at a relative tolerance. Group means are
/// taken in generator order, which keeps the representatives of a group and
/// of its negated twin exact negations of each other.
struct PointSet {
  std::vector<Vec> pts;
  std::vector<std::vector<std::pair<int, int>>> groups;  // (index, sign) per point
  std::vector<int> gen_to_point;                         // 2n entries
  double scale = 0.0;                                    // max |v_i|
};

PointSet merge_signed_points(const Mat& m, double rel_tol = 1e-10);

/// CCW hull vertex ids of a planar point set; empty when the set has rank
/// below 2. Strictly convex turns only: points interior to an edge are not
/// vertices.
std::vector<int> hull2_ccw(const std::vector<Vec>& pts, double scale);

double polygon_area(const std::vector<Vec>& pts, const std::vector<int>& cycle);

/// 3D hull via incremental insertion with double-double orientation
/// predicates; coplanar triangles merged into facet cycles afterwards.
struct Hull3 {
  bool degenerate = false;  // input rank below 3
  struct Face {
    std::vector<int> cycle;  // vertex point ids, CCW from outside
    Vec normal;
    double offset;
  };
  std::vector<Face> faces;
  std::vector<char> is_vertex;  // per input point
  double volume = 0.0;
};

Hull3 hull3(const std::vector<Vec>& pts, double scale, bool full_structure);

/// Hull volume of a point set in dimension 2 or 3; 0 for degenerate input.
double hull_volume_points(const std::vector<Vec>& pts, int k, double scale);

}  // namespace uframe::detail
