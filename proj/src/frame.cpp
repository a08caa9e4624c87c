#include "uframe/frame.hpp"

#include <cmath>
#include <string>

#include "uframe/errors.hpp"
#include "uframe/rng.hpp"

namespace uframe {

namespace {

void check_shape(const Mat& m) {
  const int k = static_cast<int>(m.rows());
  const int n = static_cast<int>(m.cols());
  if (k < 2) throw DimensionError("frame: dimension k must be at least 2");
  if (n < k) throw PreconditionError("frame: need n >= k vectors");
  if (!m.allFinite()) throw PreconditionError("frame: non-finite coordinate");
}

void check_rank(const Mat& m) {
  const SingularRange sr = singular_range(m);
  if (sr.smallest <= 1e-12 * sr.largest)
    throw ConditioningError("frame: vectors do not span, smallest singular value " +
                            std::to_string(sr.smallest));
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Frame::Frame(Mat m) : m_(std::move(m)) {
  check_shape(m_);
  check_rank(m_);
}

Frame::Frame(int k, const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw PreconditionError("frame: no vectors");
  m_ = Mat(k, static_cast<int>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != k)
      throw PreconditionError("frame: vector " + std::to_string(i) +
                              " has dimension " + std::to_string(vectors[i].size()) +
                              ", expected " + std::to_string(k));
    m_.col(static_cast<int>(i)) = vectors[i];
  }
  check_shape(m_);
  check_rank(m_);
}

double GramCertificate::max_residual() const {
  double r = operator_residual;
  r = std::max(r, idempotency_residual);
  r = std::max(r, symmetry_residual);
  r = std::max(r, trace_residual);
  r = std::max(r, row_orthonormality_residual);
  return r;
}

UFrame UFrame::certify(const Frame& f, double tol) {
  const GramCertificate cert = verify_uframe(f, tol);
  if (!cert.pass())
    throw PreconditionError("uframe certification failed: max residual " +
                            std::to_string(cert.max_residual()) + " exceeds " +
                            std::to_string(tol));
  return UFrame(f.matrix(), tol);
}

Mat frame_operator(const Frame& s) { return s.matrix() * s.matrix().transpose(); }

UFrame whiten(const Frame& s, double eig_floor) {
  const Mat b = inverse_sqrt_spd(frame_operator(s), eig_floor);
  Mat white = b * s.matrix();
  const double residual = max_abs(white * white.transpose() - Mat::Identity(s.k(), s.k()));
  if (residual > kDefaultCertTol)
    throw ConditioningError("whiten: residual " + std::to_string(residual) +
                            " after whitening");
  return UFrame(std::move(white), kDefaultCertTol);
}

GramCertificate verify_uframe(const Frame& s, double tol) {
  const Mat& m = s.matrix();
  const int k = s.k();
  GramCertificate cert;
  cert.gram = m.transpose() * m;
  cert.operator_residual = max_abs(frame_operator(s) - Mat::Identity(k, k));
  cert.idempotency_residual = max_abs(cert.gram * cert.gram - cert.gram);
  cert.symmetry_residual = max_abs(cert.gram.transpose() - cert.gram);
  cert.trace_residual = std::abs(cert.gram.trace() - static_cast<double>(k));
  cert.row_orthonormality_residual = max_abs(m * m.transpose() - Mat::Identity(k, k));
  cert.tolerance = tol;
  return cert;
}

Mat complete_to_orthogonal(const UFrame& s) {
  const int n = s.n();
  const int k = s.k();
  Mat q = Mat::Zero(n, n);
  q.topRows(k) = s.matrix();

  int rows = k;
  // Candidate pool: the standard basis of R^n.
  for (int j = 0; j < n && rows < n; ++j) {
    Mat trial = q;
    trial.row(rows) = Vec::Unit(n, j).transpose();
    Mat sub = trial.topRows(rows + 1);
    const std::vector<int> kept = mgs_rows(sub, rows, 1e-6);
    if (kept.empty()) continue;  // near-dependent candidate, skip
    q.topRows(rows + 1) = sub;
    ++rows;
  }
  if (rows < n)
    throw ConditioningError("complete_to_orthogonal: Gram-Schmidt degenerated");
  return q;
}

namespace {

/// Orthonormal basis of the hyperplane orthogonal to a unit direction.
/// Rows of the result are the basis vectors; deterministic.
Mat hyperplane_basis(const Vec& direction, int k) {
  Mat rows = Mat::Zero(k, k);
  rows.row(0) = direction.transpose();
  int have = 1;
  for (int j = 0; j < k && have < k; ++j) {
    Mat trial = rows;
    trial.row(have) = Vec::Unit(k, j).transpose();
    Mat sub = trial.topRows(have + 1);
    const std::vector<int> kept = mgs_rows(sub, have, 1e-6);
    if (kept.empty()) continue;
    rows.topRows(have + 1) = sub;
    ++have;
  }
  if (have < k) throw ConditioningError("hyperplane basis construction degenerated");
  return rows.bottomRows(k - 1);
}

void check_unit(const Vec& direction, int k) {
  if (direction.size() != k)
    throw PreconditionError("direction has wrong dimension");
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw PreconditionError("direction must be a unit vector");
}

}  // namespace

UFrame project_frame(const UFrame& s, const Vec& direction) {
  if (s.k() < 3)
    throw DimensionError("project_frame: needs k >= 3; use project_frame_line for k = 2");
  check_unit(direction, s.k());
  const Mat basis = hyperplane_basis(direction, s.k());  // (k-1) x k
  Mat projected = basis * s.matrix();                    // (k-1) x n
  return UFrame::certify(Frame(std::move(projected)), 10.0 * s.tolerance());
}

std::vector<double> project_frame_line(const UFrame& s, const Vec& direction) {
  if (s.k() != 2) throw DimensionError("project_frame_line: only defined for k = 2");
  check_unit(direction, 2);
  // The hyperplane orthogonal to `direction` in the plane.
  Vec b(2);
  b << -direction[1], direction[0];
  std::vector<double> coords(s.n());
  for (int i = 0; i < s.n(); ++i) coords[i] = b.dot(s.vector(i));
  return coords;
}

UFrame lift(const UFrame& s) {
  const int k = s.k();
  const int n = s.n();
  Mat m = Mat::Zero(k + 1, n + 1);
  m.topLeftCorner(k, n) = s.matrix();
  m(k, n) = 1.0;
  return UFrame::certify(Frame(std::move(m)), s.tolerance());
}

UFrame random_uframe(int n, int k, std::uint64_t seed) {
  if (k < 2 || n < k) throw PreconditionError("random_uframe: need n >= k >= 2");
  DetRng rng(seed);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  const std::vector<int> kept = mgs_rows(g, 0, 1e-8);
  if (static_cast<int>(kept.size()) < n)
    throw NumericalError("random_uframe: Gaussian matrix degenerated");
  return UFrame::certify(Frame(g.topRows(k)), 1e-10);
}

namespace {

/// B_{S\i} w for B_{S\i} = (I - v (x) v)^{-1/2}, via the rank-one structure:
/// the map scales the v direction by 1/sqrt(1-|v|^2).
Vec remove_one_whitener_apply(const Vec& v, const Vec& w) {
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) return w;
  const double gamma = 1.0 / std::sqrt(1.0 - n2) - 1.0;
  const Vec u = v / std::sqrt(n2);
  return w + gamma * u.dot(w) * u;
}

}  // namespace

double det_after_substitution(const UFrame& s, int i, const Vec& v) {
  if (i < 0 || i >= s.n()) throw PreconditionError("det_after_substitution: index out of range");
  if (v.size() != s.k()) throw PreconditionError("det_after_substitution: bad vector dimension");
  const Vec vi = s.vector(i);
  if (vi.norm() >= 1.0 - 1e-9)
    throw PreconditionError("det_after_substitution: |v_i| must be below 1 - 1e-9");
  const double num = 1.0 + remove_one_whitener_apply(vi, vi).squaredNorm();
  const double den = 1.0 + remove_one_whitener_apply(vi, v).squaredNorm();
  return std::sqrt(num / den);
}

double first_order_det(const UFrame& s, const std::vector<Perturbation>& perturbations) {
  double acc = 1.0;
  for (const Perturbation& p : perturbations) {
    if (p.index < 0 || p.index >= s.n())
      throw PreconditionError("first_order_det: index out of range");
    if (p.direction.size() != s.k())
      throw PreconditionError("first_order_det: bad direction dimension");
    acc += p.scale * p.direction.dot(s.vector(p.index));
  }
  return acc;
}

}  // namespace uframe
