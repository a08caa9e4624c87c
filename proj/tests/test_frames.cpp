#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "uframe/errors.hpp"
#include "uframe/extremal.hpp"
#include "uframe/frame.hpp"
#include "uframe/frame_io.hpp"
#include "uframe/rng.hpp"

using namespace uframe;

namespace {

Frame make_frame(std::initializer_list<std::initializer_list<double>> cols) {
  std::vector<Vec> vs;
  for (const auto& c : cols) {
    Vec v(static_cast<int>(c.size()));
    int i = 0;
    for (double x : c) v[i++] = x;
    vs.push_back(v);
  }
  return Frame(static_cast<int>(vs.front().size()), vs);
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

/// Gaussian frame with entries straight from the seed; usually not a uframe.
Frame random_gaussian_frame(int n, int k, std::uint64_t seed) {
  DetRng rng(seed);
  Mat m(k, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i) m(i, j) = rng.gaussian();
  return Frame(std::move(m));
}

}  // namespace

TEST_CASE("frame construction validates shape and rank") {
  CHECK_THROWS_AS(make_frame({{1.0, 0.0}}), PreconditionError);         // n < k
  CHECK_THROWS_AS(make_frame({{1.0}, {2.0}}), DimensionError);          // k = 1
  CHECK_THROWS_AS(make_frame({{1.0, 0.0}, {1.0, 0.0}}), ConditioningError);
  CHECK_THROWS_AS(make_frame({{1.0, 0.0}, {2.0, 0.0}, {-1.0, 0.0}}), ConditioningError);
  // Zero vectors are fine as long as the rest spans.
  CHECK_NOTHROW(make_frame({{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}));
  CHECK_THROWS_AS(Frame(2, std::vector<Vec>{Vec::Unit(3, 0), Vec::Unit(3, 1)}),
                  PreconditionError);  // declared k mismatch
}

TEST_CASE("frame_operator: orthonormal basis gives the identity") {
  const Frame f = make_frame({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(max_abs(frame_operator(f) - Mat::Identity(2, 2)) == 0.0);
}

TEST_CASE("frame_operator: hexagon sums to the identity") {
  const UFrame hex = hexagon_frame();
  // Direct rank-one summation as the oracle.
  Mat acc = Mat::Zero(2, 2);
  for (int i = 0; i < 3; ++i) acc += hex.vector(i) * hex.vector(i).transpose();
  CHECK(max_abs(acc - Mat::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(frame_operator(hex) - Mat::Identity(2, 2)) < 1e-15);
}

TEST_CASE("frame_operator trace equals k on random uframes") {
  for (int t = 0; t < 20; ++t) {
    const UFrame u = random_uframe(5 + t % 3, 2 + t % 2, 100 + t);
    CHECK(std::abs(frame_operator(u).trace() - u.k()) < u.k() * 1e-10);
    double sq = 0.0;
    double mx = 0.0;
    for (int i = 0; i < u.n(); ++i) {
      sq += u.vector(i).squaredNorm();
      mx = std::max(mx, u.vector(i).norm());
    }
    CHECK(std::abs(sq - u.k()) < u.k() * 1e-10);
    CHECK(mx <= 1.0 + 1e-10);
  }
}

TEST_CASE("whiten: fixed points and diagonal scalings") {
  const UFrame u = random_uframe(4, 2, 7);
  const UFrame w = whiten(u);
  CHECK(max_abs(w.matrix() - u.matrix()) < 1e-12);

  const UFrame w2 = whiten(make_frame({{2.0, 0.0}, {0.0, 1.0}}));
  CHECK(max_abs(w2.matrix() - Mat::Identity(2, 2)) < 1e-14);

  const UFrame w3 = whiten(make_frame({{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}));
  const double r = 1.0 / std::sqrt(2.0);
  Mat expect(2, 3);
  expect << r, r, 0.0, 0.0, 0.0, 1.0;
  CHECK(max_abs(w3.matrix() - expect) < 1e-14);
}

TEST_CASE("whiten is idempotent") {
  for (int t = 0; t < 50; ++t) {
    const Frame f = random_gaussian_frame(4 + t % 4, 2 + t % 3, 900 + t);
    const UFrame w = whiten(f);
    CHECK(max_abs(whiten(w).matrix() - w.matrix()) < 1e-12);
  }
}

TEST_CASE("whiten: conditioning floor") {
  // Well-conditioned as a frame, but the operator sits below the floor.
  const Frame tiny = make_frame({{1e-7, 0.0}, {0.0, 1e-7}});
  CHECK_THROWS_AS(whiten(tiny), ConditioningError);
  CHECK_NOTHROW(whiten(tiny, 1e-16));
}

TEST_CASE("verify_uframe: exact and random orthogonal cases") {
  const GramCertificate exact = verify_uframe(make_frame({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(exact.max_residual() == 0.0);
  CHECK(exact.pass());

  const UFrame u = random_uframe(6, 3, 42);
  const GramCertificate cert = verify_uframe(u, 1e-10);
  CHECK(cert.operator_residual < 1e-10);
  CHECK(cert.idempotency_residual < 1e-10);
  CHECK(cert.symmetry_residual < 1e-10);
  CHECK(cert.trace_residual < 1e-10);
  CHECK(cert.row_orthonormality_residual < 1e-10);
  CHECK(std::abs(cert.gram.trace() - 3.0) < 1e-10);
}

TEST_CASE("verify_uframe conditions agree on pass/fail") {
  int pass_count = 0;
  for (int t = 0; t < 1000; ++t) {
    const bool want_uframe = t % 2 == 0;
    const Frame f = want_uframe
                        ? static_cast<const Frame&>(random_uframe(5, 2, 2000 + t))
                        : random_gaussian_frame(5, 2, 2000 + t);
    const GramCertificate cert = verify_uframe(f, 1e-8);
    const bool p1 = cert.operator_residual <= 1e-8;
    const bool p3 = cert.idempotency_residual <= 1e-8 &&
                    cert.symmetry_residual <= 1e-8 && cert.trace_residual <= 1e-8;
    const bool p4 = cert.row_orthonormality_residual <= 1e-8;
    CHECK(p1 == p3);
    CHECK(p1 == p4);
    CHECK(p1 == want_uframe);
    pass_count += p1;
  }
  CHECK(pass_count == 500);
}

TEST_CASE("certify rejects non-uframes") {
  CHECK_THROWS_AS(UFrame::certify(make_frame({{2.0, 0.0}, {0.0, 1.0}})), PreconditionError);
}

TEST_CASE("complete_to_orthogonal") {
  const UFrame id2 = UFrame::certify(make_frame({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(max_abs(complete_to_orthogonal(id2) - Mat::Identity(2, 2)) == 0.0);

  const UFrame hex = hexagon_frame();
  const Mat q = complete_to_orthogonal(hex);
  CHECK(q.rows() == 3);
  CHECK(max_abs(q * q.transpose() - Mat::Identity(3, 3)) < 1e-12);
  CHECK(max_abs(q.topRows(2) - hex.matrix()) == 0.0);
  // The added row spans the kernel of the Gram matrix.
  const Mat gram = hex.matrix().transpose() * hex.matrix();
  CHECK((gram * q.row(2).transpose()).cwiseAbs().maxCoeff() < 1e-12);

  for (int t = 0; t < 200; ++t) {
    const UFrame u = random_uframe(5 + t % 4, 2 + t % 3, 3000 + t);
    const Mat qq = complete_to_orthogonal(u);
    CHECK(max_abs(qq * qq.transpose() - Mat::Identity(u.n(), u.n())) < 1e-10);
    CHECK(max_abs(qq.topRows(u.k()) - u.matrix()) == 0.0);
    // Column i truncated to its first k coordinates recovers v_i.
    for (int i = 0; i < u.n(); ++i)
      CHECK((qq.col(i).head(u.k()) - u.vector(i)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("project_frame: coordinate and hexagon cases") {
  const UFrame id3 =
      UFrame::certify(make_frame({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}));
  const UFrame p = project_frame(id3, Vec::Unit(3, 2));
  CHECK(p.k() == 2);
  CHECK(p.n() == 3);
  // {e_1, e_2, 0} in some orthonormal basis of the plane.
  CHECK(std::abs(p.vector(0).norm() - 1.0) < 1e-12);
  CHECK(std::abs(p.vector(1).norm() - 1.0) < 1e-12);
  CHECK(p.vector(2).norm() < 1e-12);
  CHECK(std::abs(p.vector(0).dot(p.vector(1))) < 1e-12);

  const UFrame lifted = lift(hexagon_frame());
  const UFrame back = project_frame(lifted, Vec::Unit(3, 2));
  // Hexagon plus one zero vector, up to the basis choice (here the identity).
  CHECK(max_abs(back.matrix().leftCols(3) - hexagon_frame().matrix()) < 1e-12);
  CHECK(back.vector(3).norm() < 1e-12);

  CHECK_THROWS_AS(project_frame(hexagon_frame(), Vec::Unit(2, 0)), DimensionError);
  CHECK_THROWS_AS(project_frame(id3, Vec(Vec::Unit(3, 2) * 2.0)), PreconditionError);
}

TEST_CASE("project_frame closure on random uframes") {
  for (int t = 0; t < 50; ++t) {
    const int k = 3 + t % 2;
    const UFrame u = random_uframe(6, k, 4000 + t);
    DetRng rng(50 + t);
    Vec dir = rng.gaussian_vector(k);
    dir /= dir.norm();
    const UFrame p = project_frame(u, dir);
    CHECK(p.k() == k - 1);
    CHECK(verify_uframe(p).max_residual() < 10.0 * u.tolerance());
  }
}

TEST_CASE("project_frame_line: k = 2 scalars") {
  const UFrame hex = hexagon_frame();
  Vec dir(2);
  dir << 0.0, 1.0;
  const std::vector<double> coords = project_frame_line(hex, dir);
  double sq = 0.0;
  for (double c : coords) sq += c * c;
  CHECK(std::abs(sq - 1.0) < 1e-12);
}

TEST_CASE("lift: basis, hexagon, and double lift") {
  const UFrame id2 = UFrame::certify(make_frame({{1.0, 0.0}, {0.0, 1.0}}));
  const UFrame l = lift(id2);
  CHECK(max_abs(l.matrix() - Mat::Identity(3, 3)) == 0.0);

  const UFrame hexlift = lift(hexagon_frame());
  CHECK(hexlift.n() == 4);
  CHECK(hexlift.k() == 3);
  CHECK(verify_uframe(hexlift).max_residual() < 1e-12);

  const UFrame ll = lift(l);
  CHECK(max_abs(ll.matrix() - Mat::Identity(4, 4)) == 0.0);
}

TEST_CASE("random_uframe determinism and certification") {
  const UFrame a = random_uframe(3, 2, 1);
  const UFrame b = random_uframe(3, 2, 1);
  CHECK(max_abs(a.matrix() - b.matrix()) == 0.0);

  const UFrame c = random_uframe(5, 2, 99);
  double sq = 0.0;
  for (int i = 0; i < 5; ++i) sq += c.vector(i).squaredNorm();
  CHECK(std::abs(sq - 2.0) < 1e-10);

  const UFrame d = random_uframe(4, 3, 1234);
  CHECK(verify_uframe(d).max_residual() < 1e-10);
}

TEST_CASE("det_after_substitution: no-op, hexagon zeroing, and the direct oracle") {
  const UFrame hex = hexagon_frame();
  CHECK(det_after_substitution(hex, 0, hex.vector(0)) == 1.0);
  CHECK(std::abs(det_after_substitution(hex, 0, Vec(Vec::Zero(2))) - std::sqrt(3.0)) <
        1e-12);

  // Direct oracle: det B_{S'} = det(A_{S'})^{-1/2} with a general determinant.
  auto direct = [](const UFrame& s, int i, const Vec& v) {
    Mat m = s.matrix();
    m.col(i) = v;
    return 1.0 / std::sqrt((m * m.transpose()).determinant());
  };
  CHECK(std::abs(det_after_substitution(hex, 0, hex.vector(1)) -
                 direct(hex, 0, hex.vector(1))) < 1e-12);

  for (int t = 0; t < 200; ++t) {
    const UFrame u = random_uframe(5, 2 + t % 2, 5000 + t);
    DetRng rng(600 + t);
    int i = static_cast<int>(rng.raw() % u.n());
    if (u.vector(i).norm() >= 1.0 - 1e-9) continue;
    const Vec v = rng.gaussian_vector(u.k());
    CHECK(std::abs(det_after_substitution(u, i, v) - direct(u, i, v)) < 1e-12);
  }

  const UFrame id2 = UFrame::certify(make_frame({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK_THROWS_AS(det_after_substitution(id2, 0, Vec(Vec::Zero(2))), PreconditionError);
}

TEST_CASE("det identity: det(I +- v v^T) = 1 +- |v|^2") {
  for (int t = 0; t < 500; ++t) {
    DetRng rng(7000 + t);
    const int k = 2 + t % 3;
    Vec v = rng.gaussian_vector(k);
    v *= rng.uniform(0.0, 0.999) / v.norm();
    const Mat plus = Mat::Identity(k, k) + v * v.transpose();
    const Mat minus = Mat::Identity(k, k) - v * v.transpose();
    CHECK(std::abs(plus.determinant() - (1.0 + v.squaredNorm())) < 1e-12);
    CHECK(std::abs(minus.determinant() - (1.0 - v.squaredNorm())) < 1e-12);
  }
}

TEST_CASE("first_order_det: exact values and quadratic error decay") {
  const UFrame hex = hexagon_frame();
  CHECK(first_order_det(hex, {}) == 1.0);
  CHECK(first_order_det(hex, {{0, hex.vector(0), 0.0}}) == 1.0);

  // v_1 -> (1+t) v_1 predicts 1 + t <v_1, v_1> = 1 + (2/3) t.
  const double t = 1e-3;
  CHECK(std::abs(first_order_det(hex, {{0, hex.vector(0), t}}) - (1.0 + 2.0 / 3.0 * t)) <
        1e-15);

  auto exact_sqrt_det = [](const UFrame& s, const std::vector<Perturbation>& ps) {
    Mat m = s.matrix();
    for (const auto& p : ps) m.col(p.index) += p.scale * p.direction;
    return std::sqrt((m * m.transpose()).determinant());
  };
  int checked = 0;
  for (int c = 0; c < 60; ++c) {
    const UFrame u = random_uframe(5, 2 + c % 2, 8000 + c);
    DetRng rng(81 + c);
    std::vector<Perturbation> p1, p2;
    for (int i = 0; i < u.n(); ++i) {
      Vec x = rng.gaussian_vector(u.k());
      x /= x.norm();
      p1.push_back({i, x, 1e-4});
      p2.push_back({i, x, 0.5e-4});
    }
    const double e1 = std::abs(first_order_det(u, p1) - exact_sqrt_det(u, p1));
    const double e2 = std::abs(first_order_det(u, p2) - exact_sqrt_det(u, p2));
    if (e1 < 1e-12 || e2 < 1e-13) continue;  // degenerate second order, skip
    const double ratio = e1 / e2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("frame file round trips") {
  const UFrame hex = hexagon_frame();
  const nlohmann::json j = frame_to_json(hex);
  const Frame parsed = frame_from_json(j);
  CHECK(max_abs(parsed.matrix() - hex.matrix()) == 0.0);

  std::stringstream csv(frame_to_csv(hex));
  const Frame from_csv = frame_from_csv(csv);
  CHECK(max_abs(from_csv.matrix() - hex.matrix()) == 0.0);
}

TEST_CASE("frame file parsers reject malformed input") {
  nlohmann::json j = frame_to_json(hexagon_frame());
  j["k"] = 3;  // declared dimension no longer matches the rows
  CHECK_THROWS_AS(frame_from_json(j), FormatError);

  nlohmann::json j2 = frame_to_json(hexagon_frame());
  j2["vectors"].erase(2);
  CHECK_THROWS_AS(frame_from_json(j2), FormatError);

  std::stringstream bad_header("a,b\n1,0\n0,1\n");
  CHECK_THROWS_AS(frame_from_csv(bad_header), FormatError);

  std::stringstream ragged("v1,v2\n1,0\n0\n");
  CHECK_THROWS_AS(frame_from_csv(ragged), FormatError);

  std::stringstream bad_number("v1,v2\n1,zap\n0,1\n");
  CHECK_THROWS_AS(frame_from_csv(bad_number), FormatError);
}
