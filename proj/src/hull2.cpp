#include <algorithm>
#include <cmath>
#include <numeric>

#include "hull_internal.hpp"
#include "uframe/errors.hpp"

namespace uframe::detail {

PointSet merge_signed_points(const Mat& m, double rel_tol) {
  const int n = static_cast<int>(m.cols());
  PointSet out;
  out.gen_to_point.assign(2 * n, -1);
  for (int i = 0; i < n; ++i) out.scale = std::max(out.scale, m.col(i).norm());
  const double tol = rel_tol * std::max(out.scale, 1e-300);

  std::vector<Vec> anchors;
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < 2; ++s) {
      const Vec p = (s == 0 ? 1.0 : -1.0) * m.col(i);
      int g = -1;
      for (std::size_t a = 0; a < anchors.size(); ++a) {
        if ((anchors[a] - p).lpNorm<Eigen::Infinity>() <= tol) {
          g = static_cast<int>(a);
          break;
        }
      }
      if (g < 0) {
        g = static_cast<int>(anchors.size());
        anchors.push_back(p);
        out.groups.emplace_back();
      }
      out.groups[g].push_back({i, s == 0 ? 1 : -1});
      out.gen_to_point[2 * i + s] = g;
    }
  }
  out.pts.resize(out.groups.size());
  for (std::size_t g = 0; g < out.groups.size(); ++g) {
    Vec sum = Vec::Zero(m.rows());
    for (const auto& [i, sgn] : out.groups[g]) sum += (sgn > 0 ? 1.0 : -1.0) * m.col(i);
    out.pts[g] = sum / static_cast<double>(out.groups[g].size());
  }

  // Canonical point order (lexicographic). The representative coordinates of
  // S and -S agree exactly, so after this sort the whole hull pipeline is a
  // pure function of the point list and hull(S) == hull(-S) bit for bit.
  std::vector<int> order(out.pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int c = 0; c < out.pts[a].size(); ++c) {
      if (out.pts[a][c] != out.pts[b][c]) return out.pts[a][c] < out.pts[b][c];
    }
    return a < b;
  });
  std::vector<int> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);
  PointSet sorted;
  sorted.scale = out.scale;
  sorted.gen_to_point.resize(out.gen_to_point.size());
  sorted.pts.resize(out.pts.size());
  sorted.groups.resize(out.groups.size());
  for (std::size_t g = 0; g < out.pts.size(); ++g) {
    sorted.pts[rank[g]] = out.pts[g];
    sorted.groups[rank[g]] = out.groups[g];
  }
  for (std::size_t e = 0; e < out.gen_to_point.size(); ++e)
    sorted.gen_to_point[e] = rank[out.gen_to_point[e]];
  return sorted;
}

namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

std::vector<int> hull2_ccw(const std::vector<Vec>& pts, double scale) {
  const int m = static_cast<int>(pts.size());
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    if (pts[a][1] != pts[b][1]) return pts[a][1] < pts[b][1];
    return a < b;
  });
  const double band = 1e-12 * scale * scale;

  // Andrew's monotone chain, strict turns only.
  std::vector<int> h(2 * m + 2);
  int t = 0;
  for (int ii = 0; ii < m; ++ii) {
    const int i = idx[ii];
    while (t >= 2 && cross2(pts[h[t - 2]], pts[h[t - 1]], pts[i]) <= band) --t;
    h[t++] = i;
  }
  const int lower = t + 1;
  for (int ii = m - 2; ii >= 0; --ii) {
    const int i = idx[ii];
    while (t >= lower && cross2(pts[h[t - 2]], pts[h[t - 1]], pts[i]) <= band) --t;
    h[t++] = i;
  }
  --t;  // h[t] repeats h[0]
  std::vector<int> cycle(h.begin(), h.begin() + t);
  if (static_cast<int>(cycle.size()) < 3) return {};
  // Canonical start: the smallest point id.
  const auto mn = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), mn, cycle.end());
  return cycle;
}

double polygon_area(const std::vector<Vec>& pts, const std::vector<int>& cycle) {
  double a2 = 0.0;
  const int m = static_cast<int>(cycle.size());
  for (int i = 0; i < m; ++i) {
    const Vec& p = pts[cycle[i]];
    const Vec& q = pts[cycle[(i + 1) % m]];
    a2 += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * a2;
}

double hull_volume_points(const std::vector<Vec>& pts, int k, double scale) {
  if (k == 2) {
    const std::vector<int> cycle = hull2_ccw(pts, scale);
    return cycle.empty() ? 0.0 : polygon_area(pts, cycle);
  }
  if (k == 3) {
    const Hull3 h = hull3(pts, scale, /*full_structure=*/false);
    return h.degenerate ? 0.0 : h.volume;
  }
  throw DimensionError("hull_volume_points: k must be 2 or 3");
}

}  // namespace uframe::detail
