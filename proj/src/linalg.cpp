#include "uframe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "uframe/errors.hpp"

namespace uframe {

namespace {

double offdiag_mass(const Mat& a) {
  double s = 0.0;
  for (int p = 0; p < a.rows(); ++p)
    for (int q = 0; q < a.cols(); ++q)
      if (p != q) s += a(p, q) * a(p, q);
  return std::sqrt(s);
}

}  // namespace

SymEigen jacobi_eigensym(const Mat& a, double off_tol) {
  const int k = static_cast<int>(a.rows());
  if (a.cols() != k) throw PreconditionError("jacobi_eigensym: matrix not square");
  Mat d = 0.5 * (a + a.transpose());
  Mat v = Mat::Identity(k, k);
  const double target = off_tol * std::max(1.0, d.norm());

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && offdiag_mass(d) > target; ++sweep) {
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = d(p, q);
        if (std::abs(apq) == 0.0) continue;
        const double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Right-multiply by the rotation, then left-multiply by its transpose.
        for (int i = 0; i < k; ++i) {
          const double dip = d(i, p), diq = d(i, q);
          d(i, p) = c * dip - s * diq;
          d(i, q) = s * dip + c * diq;
        }
        for (int i = 0; i < k; ++i) {
          const double dpi = d(p, i), dqi = d(q, i);
          d(p, i) = c * dpi - s * dqi;
          d(q, i) = s * dpi + c * dqi;
        }
        for (int i = 0; i < k; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (offdiag_mass(d) > std::max(target, 1e-10 * std::max(1.0, d.norm())))
    throw NumericalError("jacobi_eigensym: no convergence in 64 sweeps");

  SymEigen out;
  out.values = Vec(k);
  for (int i = 0; i < k; ++i) out.values[i] = d(i, i);
  out.vectors = std::move(v);
  // Sort ascending, deterministically.
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return out.values[i] < out.values[j];
  });
  Vec sv(k);
  Mat svec(k, k);
  for (int i = 0; i < k; ++i) {
    sv[i] = out.values[order[i]];
    svec.col(i) = out.vectors.col(order[i]);
  }
  out.values = std::move(sv);
  out.vectors = std::move(svec);
  return out;
}

Mat inverse_sqrt_spd(const Mat& a, double eig_floor) {
  const SymEigen eig = jacobi_eigensym(a);
  if (eig.values[0] < eig_floor)
    throw ConditioningError("inverse_sqrt_spd: eigenvalue " +
                            std::to_string(eig.values[0]) + " below floor");
  const int k = static_cast<int>(a.rows());
  Vec inv_sqrt(k);
  for (int i = 0; i < k; ++i) inv_sqrt[i] = 1.0 / std::sqrt(eig.values[i]);
  Mat b = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (b + b.transpose());
}

SingularRange singular_range(const Mat& m) {
  const SymEigen eig = jacobi_eigensym(m * m.transpose());
  const double lo = std::max(0.0, eig.values[0]);
  const double hi = std::max(0.0, eig.values[eig.values.size() - 1]);
  return {std::sqrt(lo), std::sqrt(hi)};
}

std::vector<int> mgs_rows(Mat& rows, int fixed_rows, double drop_tol) {
  const int n = static_cast<int>(rows.rows());
  std::vector<int> kept;
  for (int i = fixed_rows; i < n; ++i) {
    Vec r = rows.row(i).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < fixed_rows; ++j)
        r -= rows.row(j).dot(r.transpose()) * rows.row(j).transpose();
      for (int j : kept) r -= rows.row(j).dot(r.transpose()) * rows.row(j).transpose();
    }
    const double nrm = r.norm();
    if (nrm < drop_tol) continue;
    rows.row(i) = (r / nrm).transpose();
    kept.push_back(i);
  }
  return kept;
}

}  // namespace uframe
