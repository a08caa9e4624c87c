#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "uframe/errors.hpp"
#include "uframe/extremal.hpp"
#include "uframe/frame.hpp"
#include "uframe/geometry.hpp"
#include "uframe/rng.hpp"
#include "uframe/sections.hpp"

using namespace uframe;

namespace {

UFrame basis_uframe(int k) {
  return UFrame::certify(Frame(Mat(Mat::Identity(k, k))), 1e-15);
}

/// Monte Carlo section volume with direct slab membership; independent of
/// the clipping code path.
double mc_section_volume(const UFrame& s, long samples, std::uint64_t seed,
                         double* std_error) {
  const double r = std::sqrt(static_cast<double>(s.n()));
  DetRng rng(seed);
  long hits = 0;
  Vec x(s.k());
  for (long t = 0; t < samples; ++t) {
    for (int c = 0; c < s.k(); ++c) x[c] = rng.uniform(-r, r);
    bool in = true;
    for (int i = 0; i < s.n() && in; ++i)
      if (std::abs(s.vector(i).dot(x)) > 1.0) in = false;
    if (in) ++hits;
  }
  const double box = std::pow(2.0 * r, s.k());
  const double p = static_cast<double>(hits) / samples;
  if (std_error) *std_error = box * std::sqrt(p * (1.0 - p) / samples);
  return box * p;
}

UFrame column_permuted(const UFrame& s, const std::vector<int>& perm) {
  Mat m(s.k(), s.n());
  for (int i = 0; i < s.n(); ++i) m.col(i) = s.vector(perm[i]);
  return UFrame::certify(Frame(std::move(m)), s.tolerance());
}

}  // namespace

TEST_CASE("cube_section: standard basis gives the cube itself") {
  const SectionPolytope q2 = cube_section(basis_uframe(2));
  CHECK(q2.volume == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(q2.vertices.size() == 4);
  CHECK(q2.active == std::vector<int>{0, 1});

  const SectionPolytope q3 = cube_section(basis_uframe(3));
  CHECK(q3.volume == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(q3.vertices.size() == 8);
  CHECK(q3.facets.size() == 6);
  CHECK(q3.active == std::vector<int>{0, 1, 2});
}

TEST_CASE("cube_section: canonical minimum frame attains the section maximum") {
  const SectionPolytope q = cube_section(canonical_min_frame(4, 2));
  CHECK(q.volume == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(q.vertices.size() == 4);

  // With zero vectors the vacuous slabs change nothing.
  const SectionPolytope qz = cube_section(coordinate_max_frame(3, 2));
  CHECK(qz.volume == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("cube_section: hexagon section is the polar hexagon") {
  const UFrame hex = hexagon_frame();
  const SectionPolytope q = cube_section(hex);
  CHECK(q.vertices.size() == 6);
  // Apothem sqrt(3/2) regular hexagon: area 2 sqrt(3) a^2 = 3 sqrt(3).
  CHECK(q.volume == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-12));
  for (const Vec& w : q.vertices)
    CHECK(w.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  double se = 0.0;
  const double mc = mc_section_volume(hex, 200000, 11, &se);
  CHECK(std::abs(q.volume - mc) < 3.0 * se);
}

TEST_CASE("cube_section: wide collinear groups exceed the sqrt(k) ball") {
  // Three copies of e_1/sqrt(3) push the section out to |x_1| = sqrt(3).
  const UFrame canon = canonical_min_frame(5, 2);
  const SectionPolytope q = cube_section(canon);
  CHECK(q.volume == doctest::Approx(4.0 * std::sqrt(6.0)).epsilon(1e-12));
  double mx = 0.0;
  for (const Vec& w : q.vertices) mx = std::max(mx, w.lpNorm<Eigen::Infinity>());
  CHECK(mx == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("cube_section: random k=3 frames agree with direct-membership MC") {
  for (int t = 0; t < 5; ++t) {
    const UFrame u = random_uframe(5 + t, 3, 7000 + t);
    const SectionPolytope q = cube_section(u);
    double se = 0.0;
    const double mc = mc_section_volume(u, 150000, 40 + t, &se);
    CHECK(std::abs(q.volume - mc) < 3.0 * se);

    // Euler relation for the section polytope.
    std::set<std::pair<int, int>> edges;
    for (const Facet& f : q.facets) {
      const int m = static_cast<int>(f.cycle.size());
      for (int j = 0; j < m; ++j)
        edges.insert({std::min(f.cycle[j], f.cycle[(j + 1) % m]),
                      std::max(f.cycle[j], f.cycle[(j + 1) % m])});
    }
    CHECK(static_cast<long>(q.vertices.size()) - static_cast<long>(edges.size()) +
              static_cast<long>(q.facets.size()) ==
          2);
    // Every facet lies on a generator slab boundary.
    CHECK(!q.active.empty());
    for (const Facet& f : q.facets) {
      bool matched = false;
      for (int i = 0; i < u.n(); ++i) {
        const Vec v = u.vector(i);
        if (std::abs(std::abs(f.normal.dot(v)) - v.norm()) <= 1e-7 &&
            std::abs(f.offset - 1.0 / v.norm()) <= 1e-6)
          matched = true;
      }
      CHECK(matched);
    }
  }
}

TEST_CASE("cube_section: clipping order does not matter") {
  for (int t = 0; t < 6; ++t) {
    const int k = 2 + t % 2;
    const UFrame u = random_uframe(6, k, 8100 + t);
    const SectionPolytope q = cube_section(u);
    std::vector<int> perm{5, 2, 0, 4, 1, 3};
    const SectionPolytope qp = cube_section(column_permuted(u, perm));
    CHECK(q.volume == doctest::Approx(qp.volume).epsilon(1e-12));
    CHECK(q.vertices.size() == qp.vertices.size());
    for (const Vec& w : q.vertices) {
      bool found = false;
      for (const Vec& wp : qp.vertices)
        if ((w - wp).lpNorm<Eigen::Infinity>() < 1e-9) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("polar_check: section and hull are polar to each other") {
  CHECK(polar_check(basis_uframe(2)) < 1e-12);
  CHECK(polar_check(hexagon_frame()) < 1e-9);
  for (int t = 0; t < 40; ++t) {
    const int k = 2 + t % 2;
    const UFrame u = random_uframe(4 + t % 4, k, 9000 + t);
    CHECK(polar_check(u) < 1e-9);
  }
}

TEST_CASE("bounds_report: tight cases") {
  const BoundsReport r2 = bounds_report(basis_uframe(2));
  CHECK(r2.vol_section == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r2.vaaler == 4.0);
  CHECK(r2.ball == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r2.pass);
  CHECK(r2.mahler_product == doctest::Approx(8.0).epsilon(1e-12));

  const BoundsReport rc = bounds_report(canonical_min_frame(4, 2));
  CHECK(rc.vol_section == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(rc.ball == doctest::Approx(8.0).epsilon(1e-12));  // min{2, 2} * 4
  CHECK(rc.pass);
  CHECK(rc.mahler_product == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("bounds_report: random frames satisfy Vaaler, Ball and Mahler") {
  for (int t = 0; t < 60; ++t) {
    const int n = 3 + t % 6;
    const UFrame u = random_uframe(n, 2, 10000 + t);
    const BoundsReport r = bounds_report(u);
    CHECK(r.pass);
    CHECK(r.vol_section >= 4.0 - 1e-9);
    CHECK(r.vol_section <=
          std::min(std::pow(n / 2.0, 1.0), std::pow(2.0, (n - 2) / 2.0)) * 4.0 + 1e-9);
    CHECK(r.mahler_product >= 8.0 - 1e-9);
  }
  const BoundsReport r6 = bounds_report(random_uframe(6, 2, 123));
  CHECK(r6.ball == doctest::Approx(12.0).epsilon(1e-12));  // min{3, 4} * 4
}

TEST_CASE("bounds_report json schema") {
  const nlohmann::json j = to_json(bounds_report(basis_uframe(2)));
  CHECK(j.contains("vol_section"));
  CHECK(j.contains("vaaler"));
  CHECK(j.contains("ball"));
  CHECK(j.contains("pass"));
  CHECK(j.contains("mahler_product"));
  CHECK(j.size() == 5);
}

TEST_CASE("cube_section dimension guard") {
  Mat m4 = Mat::Identity(4, 4);
  const UFrame u4 = UFrame::certify(Frame(std::move(m4)), 1e-15);
  CHECK_THROWS_AS(cube_section(u4), DimensionError);
  CHECK_THROWS_AS(bounds_report(u4), DimensionError);
}
