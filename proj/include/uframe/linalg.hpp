#pragma once

#include <Eigen/Dense>

namespace uframe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Eigendecomposition A = V diag(values) V^T of a symmetric matrix.
struct SymEigen {
  Vec values;   // ascending
  Mat vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi rotations on a symmetric matrix. Sweeps run until the
/// off-diagonal Frobenius mass drops below off_tol * max(1, ||A||_F).
/// Intended for the small (k <= 8) operators this library works with.
SymEigen jacobi_eigensym(const Mat& a, double off_tol = 1e-14);

/// A^{-1/2} for symmetric positive definite A via jacobi_eigensym.
/// Throws ConditioningError when the smallest eigenvalue is below eig_floor.
Mat inverse_sqrt_spd(const Mat& a, double eig_floor = 1e-12);

/// Smallest/largest singular values of a k x n matrix, from the spectrum
/// of M M^T.
struct SingularRange {
  double smallest;
  double largest;
};
SingularRange singular_range(const Mat& m);

/// Two modified Gram-Schmidt passes over the rows of `rows` in place,
/// orthogonalizing each row against `fixed_rows` already-orthonormal rows
/// at the top. Rows whose remainder falls below drop_tol are considered
/// dependent; returns the indices of the rows that survived.
std::vector<int> mgs_rows(Mat& rows, int fixed_rows, double drop_tol);

}  // namespace uframe
