#pragma once

#include <cstdint>
#include <vector>

#include "uframe/linalg.hpp"

namespace uframe {

/// Default certification tolerance for uframes.
inline constexpr double kDefaultCertTol = 1e-9;

/// An (n,k)-frame: n vectors spanning R^k, stored as the columns of a
/// k x n matrix. Zero vectors are allowed; the collection as a whole must
/// span (smallest singular value above 1e-12 times the largest).
class Frame {
 public:
  /// Columns of `m` are the vectors.
  explicit Frame(Mat m);
  Frame(int k, const std::vector<Vec>& vectors);

  int k() const { return static_cast<int>(m_.rows()); }
  int n() const { return static_cast<int>(m_.cols()); }
  const Mat& matrix() const { return m_; }
  Vec vector(int i) const { return m_.col(i); }

 protected:
  struct Unchecked {};
  Frame(Mat m, Unchecked) : m_(std::move(m)) {}

  Mat m_;
};

/// Residuals of the testable uframe characterizations. `gram` is the n x n
/// Gram matrix of the vectors, which for a uframe is an orthogonal
/// projector of trace k.
struct GramCertificate {
  Mat gram;
  double operator_residual;           // || sum v_i (x) v_i - I ||_max
  double idempotency_residual;        // || G^2 - G ||_max
  double symmetry_residual;           // || G^T - G ||_max
  double trace_residual;              // | tr G - k |
  double row_orthonormality_residual; // || M M^T - I ||_max
  double tolerance;                   // tolerance the caller asked about

  double max_residual() const;
  bool pass() const { return max_residual() <= tolerance; }
};

/// A frame certified to give a unit decomposition: sum v_i (x) v_i = I_k
/// within `tolerance()`.
class UFrame : public Frame {
 public:
  /// Verifies the unit-decomposition residual and certifies, or throws
  /// PreconditionError.
  static UFrame certify(const Frame& f, double tol = kDefaultCertTol);

  double tolerance() const { return tol_; }

 private:
  friend UFrame whiten(const Frame&, double);
  UFrame(Mat m, double tol) : Frame(std::move(m), Unchecked{}), tol_(tol) {}

  double tol_;
};

/// The frame operator A_S = sum v_i (x) v_i (symmetric positive definite).
Mat frame_operator(const Frame& s);

/// Maps a frame to the uframe B_S S with B_S = A_S^{-1/2}; the inverse
/// square root comes from the cyclic Jacobi eigendecomposition of A_S.
/// Throws ConditioningError when the smallest eigenvalue of A_S is below
/// eig_floor.
UFrame whiten(const Frame& s, double eig_floor = 1e-12);

/// Residuals of all testable equivalent uframe conditions at `tol`.
GramCertificate verify_uframe(const Frame& s, double tol = kDefaultCertTol);

/// An n x n orthogonal matrix whose first k rows are the rows of M, so that
/// each v_i is the projection of the i-th column basis vector onto R^k.
/// Completion uses modified Gram-Schmidt seeded with standard basis vectors,
/// skipping near-dependent candidates.
Mat complete_to_orthogonal(const UFrame& s);

/// Projects every vector onto the hyperplane orthogonal to `direction`
/// (a unit vector) and expresses the result in an orthonormal basis of that
/// hyperplane: an (n, k-1)-uframe. Requires k >= 3.
UFrame project_frame(const UFrame& s, const Vec& direction);

/// k = 2 variant of project_frame: the hyperplane is a line, so the result
/// is the list of scalar coordinates (their squares sum to 1).
std::vector<double> project_frame_line(const UFrame& s, const Vec& direction);

/// Appends a zero (k+1)-st coordinate to every vector and appends e_{k+1}:
/// an (n+1, k+1)-uframe.
UFrame lift(const UFrame& s);

/// First k rows of an orthogonalized n x n Gaussian matrix, deterministic
/// in (n, k, seed); certified at 1e-10.
UFrame random_uframe(int n, int k, std::uint64_t seed);

/// det B_{S'} where S' = whiten(S with v_i replaced by v), by the closed
/// form sqrt((1+|B v_i|^2)/(1+|B v|^2)) with B the inverse square root of
/// I - v_i (x) v_i. Requires |v_i| < 1 - 1e-9.
double det_after_substitution(const UFrame& s, int i, const Vec& v);

struct Perturbation {
  int index;
  Vec direction;
  double scale;
};

/// First-order predictor 1 + sum t_i <x_i, v_i> for sqrt(det A_{S'}) under
/// the substitutions v_i -> v_i + t_i x_i.
double first_order_det(const UFrame& s, const std::vector<Perturbation>& perturbations);

}  // namespace uframe
