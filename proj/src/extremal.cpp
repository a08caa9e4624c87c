#include "uframe/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "uframe/errors.hpp"

namespace uframe {

long long Partition::product() const {
  long long p = 1;
  for (int d : parts) p *= d;
  return p;
}

int Partition::sum() const {
  int s = 0;
  for (int d : parts) s += d;
  return s;
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

ExtremalConstants constants(int n, int k) {
  if (k < 2 || n < k) throw RangeError("constants: need n >= k >= 2");
  if (n > 60) throw RangeError("constants: enumeration oracle capped at n = 60");

  // Enumerate all partitions of n into exactly k positive nonincreasing parts.
  ExtremalConstants out;
  out.n = n;
  out.k = k;
  out.product = -1;
  std::vector<int> parts(k);
  std::function<void(int, int, int)> rec = [&](int pos, int remaining, int max_part) {
    if (pos == k) {
      if (remaining != 0) return;
      long long prod = 1;
      for (int d : parts) prod *= d;
      if (prod > out.product) {
        out.product = prod;
        out.best_partition.parts = parts;
      }
      return;
    }
    const int slots_left = k - pos;
    for (int d = std::min(max_part, remaining - (slots_left - 1)); d >= 1; --d) {
      // Remaining parts are at most d each and at least 1 each.
      if (static_cast<long long>(d) * (slots_left - 1) < remaining - d) break;
      parts[pos] = d;
      rec(pos + 1, remaining - d, d);
    }
  };
  rec(0, n, n - k + 1);

  out.min_projection_volume =
      std::pow(2.0, k) / factorial(k) / std::sqrt(static_cast<double>(out.product));
  out.max_section_volume = std::pow(2.0, k) * std::sqrt(static_cast<double>(out.product));

  const int lo = n / k;
  const int hi_count = n - k * lo;
  long long formula = 1;
  for (int i = 0; i < hi_count; ++i) formula *= (lo + 1);
  for (int i = 0; i < k - hi_count; ++i) formula *= lo;
  out.paper_formula_value = formula;
  return out;
}

UFrame canonical_min_frame(int n, int k, const std::vector<int>& signs) {
  if (k < 2 || n < k) throw RangeError("canonical_min_frame: need n >= k >= 2");
  if (!signs.empty() && static_cast<int>(signs.size()) != n)
    throw PreconditionError("canonical_min_frame: signs must have length n");
  const int lo = n / k;
  const int hi_count = n - k * lo;
  Mat m = Mat::Zero(k, n);
  int col = 0;
  for (int j = 0; j < k; ++j) {
    const int d = j < hi_count ? lo + 1 : lo;
    for (int c = 0; c < d; ++c, ++col) {
      const double sgn = signs.empty() ? 1.0 : static_cast<double>(signs[col]);
      m(j, col) = sgn / std::sqrt(static_cast<double>(d));
    }
  }
  return UFrame::certify(Frame(std::move(m)), 1e-12);
}

UFrame coordinate_max_frame(int n, int k) {
  if (k < 2 || n < k) throw RangeError("coordinate_max_frame: need n >= k >= 2");
  Mat m = Mat::Zero(k, n);
  for (int j = 0; j < k; ++j) m(j, j) = 1.0;
  return UFrame::certify(Frame(std::move(m)), 1e-12);
}

UFrame hexagon_frame() {
  const double r = std::sqrt(2.0 / 3.0);
  Mat m(2, 3);
  m.col(0) << r, 0.0;
  m.col(1) << 0.5 * r, r * std::sqrt(3.0) / 2.0;
  m.col(2) << -0.5 * r, r * std::sqrt(3.0) / 2.0;
  return UFrame::certify(Frame(std::move(m)), 1e-12);
}

int search_cap(int k) {
  if (k < 2) throw RangeError("search_cap: need k >= 2");
  return k * k * k;
}

NecessaryConditionReport necessary_condition(const UFrame& s, double tol) {
  if (s.k() != 2 && s.k() != 3)
    throw DimensionError("necessary_condition: k must be 2 or 3");
  const SymPolytope p = hull(s);
  NecessaryConditionReport rep;
  rep.tol = tol;
  rep.simplicial = is_simplicial(p);

  double scale = 0.0;
  for (int i = 0; i < s.n(); ++i) scale = std::max(scale, s.vector(i).norm());
  for (int i = 0; i < s.n(); ++i) {
    if (s.vector(i).norm() <= 1e-9 * std::max(scale, 1.0)) continue;
    if (p.generator_vertex[2 * i] < 0) rep.non_vertex_indices.push_back(i);
  }

  // One representative per +- vertex pair: the lexicographically larger one.
  std::set<int> seen;
  rep.belt_sum = 0.0;
  double max_residual = 0.0;
  bool t_ok = true;
  for (std::size_t j = 0; j < p.vertices.size(); ++j) {
    if (seen.count(static_cast<int>(j))) continue;
    const Vec& v = p.vertices[j];
    Vec canon = v;
    for (int c = 0; c < canon.size(); ++c) {
      if (canon[c] > -canon[c]) break;
      if (canon[c] < -canon[c]) {
        canon = -v;
        break;
      }
    }
    // Mark the negated vertex as consumed.
    for (std::size_t l = 0; l < p.vertices.size(); ++l)
      if (l != j && (p.vertices[l] + v).lpNorm<Eigen::Infinity>() <= 1e-9 * std::max(scale, 1.0))
        seen.insert(static_cast<int>(l));

    const StarDecomposition star = star_belt_rest(p, canon, s);
    const double ratio = star.vol_star / p.volume;
    rep.belt_sum += ratio;
    const double n2 = canon.squaredNorm();
    const double residual = std::abs(n2 - ratio);
    max_residual = std::max(max_residual, residual);
    rep.vertices.push_back(canon);
    rep.residuals.push_back(residual);

    TCheck tc;
    tc.t_boundary = star.t_boundary;
    if (n2 >= 1.0 - 1e-12) {
      tc.lower = 0.0;
      tc.upper = 0.0;
      tc.pass = star.t_boundary <= tol;
    } else {
      const double x = std::sqrt(1.0 - n2);
      tc.lower = x / (std::sqrt(static_cast<double>(s.n() - 1)) * std::sqrt(1.0 - x * x));
      tc.upper = x / (1.0 + x);
      tc.pass = (star.t_boundary <= tc.upper + tol) && (star.t_boundary >= tc.lower - tol);
    }
    t_ok = t_ok && tc.pass;
    rep.t_checks.push_back(tc);
  }
  rep.local_max_pass = rep.simplicial && max_residual < tol && rep.non_vertex_indices.empty();
  rep.t_test_pass = t_ok;
  return rep;
}

nlohmann::json to_json(const Partition& p) {
  return nlohmann::json(p.parts);
}

nlohmann::json to_json(const ExtremalConstants& c) {
  return nlohmann::json{{"n", c.n},
                        {"k", c.k},
                        {"best_partition", to_json(c.best_partition)},
                        {"product", c.product},
                        {"min_projection_volume", c.min_projection_volume},
                        {"max_section_volume", c.max_section_volume},
                        {"paper_formula_value", c.paper_formula_value}};
}

nlohmann::json to_json(const NecessaryConditionReport& r) {
  nlohmann::json verts = nlohmann::json::array();
  for (const Vec& v : r.vertices) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < v.size(); ++c) row.push_back(v[c]);
    verts.push_back(std::move(row));
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const TCheck& t : r.t_checks)
    checks.push_back(nlohmann::json{{"t_boundary", t.t_boundary},
                                    {"lower", t.lower},
                                    {"upper", t.upper},
                                    {"pass", t.pass}});
  return nlohmann::json{{"vertices", std::move(verts)},
                        {"residuals", r.residuals},
                        {"t_checks", std::move(checks)},
                        {"simplicial", r.simplicial},
                        {"belt_sum", r.belt_sum},
                        {"non_vertex_indices", r.non_vertex_indices},
                        {"local_max_pass", r.local_max_pass},
                        {"t_test_pass", r.t_test_pass},
                        {"tol", r.tol}};
}

}  // namespace uframe
