#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "uframe/errors.hpp"
#include "uframe/extremal.hpp"
#include "uframe/frame.hpp"
#include "uframe/geometry.hpp"

using namespace uframe;

namespace {

/// Exhaustive partition check by a second, independent route: iterate all
/// nonincreasing part vectors via odometer recursion and track the product.
long long best_product_oracle(int n, int k) {
  std::vector<int> parts(k, 1);
  long long best = -1;
  // Odometer over compositions with nonincreasing parts.
  std::function<void(int, int, int)> rec = [&](int pos, int left, int cap) {
    if (pos == k - 1) {
      if (left <= cap && left >= 1) {
        long long prod = left;
        for (int i = 0; i < k - 1; ++i) prod *= parts[i];
        best = std::max(best, prod);
      }
      return;
    }
    for (int d = 1; d <= std::min(cap, left - (k - pos - 1)); ++d) {
      parts[pos] = d;
      rec(pos + 1, left - d, d);
    }
  };
  rec(0, n, n);
  return best;
}

}  // namespace

TEST_CASE("constants: small closed cases") {
  const ExtremalConstants c42 = constants(4, 2);
  CHECK(c42.best_partition.parts == std::vector<int>{2, 2});
  CHECK(c42.product == 4);
  CHECK(c42.min_projection_volume == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c42.max_section_volume == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(c42.paper_formula_value == 4);

  const ExtremalConstants c32 = constants(3, 2);
  CHECK(c32.best_partition.parts == std::vector<int>{2, 1});
  CHECK(c32.product == 2);
  CHECK(c32.min_projection_volume == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  for (int k = 2; k <= 5; ++k) {
    const ExtremalConstants ck = constants(k, k);
    CHECK(ck.product == 1);
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    CHECK(ck.min_projection_volume ==
          doctest::Approx(std::pow(2.0, k) / kfact).epsilon(1e-14));
  }
}

TEST_CASE("constants: near-equal parts and the closed formula, n <= 40") {
  for (int n = 2; n <= 40; ++n) {
    for (int k = 2; k <= std::min(n, 6); ++k) {
      const ExtremalConstants c = constants(n, k);
      CHECK(c.best_partition.parts.front() - c.best_partition.parts.back() <= 1);
      CHECK(c.best_partition.sum() == n);
      CHECK(c.product == best_product_oracle(n, k));
      CHECK(c.product == c.paper_formula_value);
      CHECK(c.min_projection_volume * c.max_section_volume ==
            doctest::Approx(std::pow(4.0, k) / std::tgamma(k + 1.0)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(constants(61, 2), RangeError);
  CHECK_THROWS_AS(constants(3, 4), RangeError);
}

TEST_CASE("canonical_min_frame: explicit small cases") {
  const UFrame f42 = canonical_min_frame(4, 2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(f42.vector(0)[0] == doctest::Approx(r));
  CHECK(f42.vector(1)[0] == doctest::Approx(r));
  CHECK(f42.vector(2)[1] == doctest::Approx(r));
  CHECK(f42.vector(3)[1] == doctest::Approx(r));
  CHECK(hull_volume(f42) == doctest::Approx(1.0).epsilon(1e-13));

  const UFrame f32 = canonical_min_frame(3, 2);
  CHECK(hull_volume(f32) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(f32.vector(2)[1] == doctest::Approx(1.0));

  CHECK(verify_uframe(f42).max_residual() < 1e-12);
  CHECK(verify_uframe(canonical_min_frame(7, 3)).max_residual() < 1e-12);

  // Sign choices do not move the volume.
  const UFrame signed42 = canonical_min_frame(4, 2, {1, -1, -1, 1});
  CHECK(hull_volume(signed42) == doctest::Approx(1.0).epsilon(1e-13));

  // Volumes match the constants oracle.
  for (int n = 3; n <= 8; ++n) {
    CHECK(hull_volume(canonical_min_frame(n, 2)) ==
          doctest::Approx(constants(n, 2).min_projection_volume).epsilon(1e-12));
  }
  for (int n = 4; n <= 8; ++n) {
    CHECK(hull_volume(canonical_min_frame(n, 3)) ==
          doctest::Approx(constants(n, 3).min_projection_volume).epsilon(1e-12));
  }
}

TEST_CASE("coordinate_max_frame") {
  CHECK(hull_volume(coordinate_max_frame(3, 2)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hull_volume(coordinate_max_frame(5, 3)) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(hull_volume(coordinate_max_frame(2, 2)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(verify_uframe(coordinate_max_frame(6, 2)).max_residual() == 0.0);
}

TEST_CASE("hexagon_frame") {
  const UFrame hex = hexagon_frame();
  CHECK(verify_uframe(hex).max_residual() < 1e-12);
  CHECK(hull_volume(hex) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  for (int i = 0; i < 3; ++i)
    CHECK(hex.vector(i).squaredNorm() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("search_cap") {
  CHECK(search_cap(2) == 8);
  CHECK(search_cap(3) == 27);
  CHECK(search_cap(4) == 64);
  CHECK_THROWS_AS(search_cap(1), RangeError);
}

TEST_CASE("necessary_condition: coordinate frame passes everything") {
  const NecessaryConditionReport rep = necessary_condition(coordinate_max_frame(3, 2));
  CHECK(rep.simplicial);
  CHECK(rep.local_max_pass);
  CHECK(rep.t_test_pass);
  CHECK(rep.non_vertex_indices.empty());
  for (double r : rep.residuals) CHECK(r < 1e-12);
  CHECK(rep.belt_sum == doctest::Approx(2.0).epsilon(1e-12));

  const NecessaryConditionReport rep3 = necessary_condition(coordinate_max_frame(5, 3));
  CHECK(rep3.local_max_pass);
  CHECK(rep3.t_test_pass);
}

TEST_CASE("necessary_condition: hexagon is local but flagged non-global") {
  const NecessaryConditionReport rep = necessary_condition(hexagon_frame());
  CHECK(rep.simplicial);
  CHECK(rep.local_max_pass);
  for (double r : rep.residuals) CHECK(r < 1e-12);

  CHECK_FALSE(rep.t_test_pass);
  REQUIRE(rep.t_checks.size() == 3);
  for (const TCheck& t : rep.t_checks) {
    CHECK(t.t_boundary == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t.upper == doctest::Approx(1.0 / (1.0 + std::sqrt(3.0))).epsilon(1e-12));
    CHECK(t.lower == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(t.pass);  // t = 1/2 > x/(1+x) ~ 0.366
  }
}

TEST_CASE("necessary_condition: the lifted hexagon still passes the local test") {
  const NecessaryConditionReport rep = necessary_condition(lift(hexagon_frame()));
  CHECK(rep.simplicial);
  CHECK(rep.local_max_pass);
  for (double r : rep.residuals) CHECK(r < 1e-11);
}

TEST_CASE("necessary_condition: random polygons are simplicial with belt sum k") {
  for (int t = 0; t < 15; ++t) {
    const UFrame u = random_uframe(5, 2, 11000 + t);
    const NecessaryConditionReport rep = necessary_condition(u);
    CHECK(rep.simplicial);
    CHECK(rep.belt_sum == doctest::Approx(2.0).epsilon(1e-9));
    // Flagged indices are exactly the nonzero generators that lie strictly
    // inside the hull of the rest.
    const SymPolytope p = hull(u);
    for (int i = 0; i < u.n(); ++i) {
      const bool flagged =
          std::find(rep.non_vertex_indices.begin(), rep.non_vertex_indices.end(), i) !=
          rep.non_vertex_indices.end();
      CHECK(flagged == (p.generator_vertex[2 * i] < 0));
    }
  }
}

TEST_CASE("necessary_condition flags interior generators") {
  Mat m(2, 3);
  m.col(0) << 1.0, 0.0;
  m.col(1) << 0.0, 1.0;
  m.col(2) << 0.0, 0.0;
  UFrame u = UFrame::certify(Frame(std::move(m)), 1e-12);
  // Shrink one basis vector and renormalize: the third stays interior.
  Mat mm(2, 4);
  mm.col(0) << 0.9, 0.0;
  mm.col(1) << std::sqrt(1.0 - 0.81), 0.0;
  mm.col(2) << 0.0, 1.0;
  mm.col(3) << 0.05, 0.0;
  // Not a uframe; whiten it first.
  const UFrame w = whiten(Frame(std::move(mm)));
  const NecessaryConditionReport rep = necessary_condition(w);
  CHECK(!rep.non_vertex_indices.empty());
  CHECK_FALSE(rep.local_max_pass);
  (void)u;
}
