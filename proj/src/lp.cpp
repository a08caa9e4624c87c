#include "uframe/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "uframe/errors.hpp"

namespace uframe {

namespace {

constexpr double kPivotTol = 1e-11;

/// Tableau layout: columns [structural | artificial | rhs], one row per
/// constraint plus a cost row at the bottom.
struct Tableau {
  Mat t;
  std::vector<int> basis;  // basic variable per row
  int rows;                // constraint count
  int cols;                // variable count (structural + artificial)

  double& at(int r, int c) { return t(r, c); }
  double rhs(int r) const { return t(r, cols); }

  void pivot(int pr, int pc) {
    t.row(pr) /= t(pr, pc);
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = t(r, pc);
      if (f != 0.0) t.row(r) -= f * t.row(pr);
    }
    basis[pr] = pc;
  }

  /// Bland's rule: entering = lowest-index column with negative reduced
  /// cost; leaving = min-ratio row, ties broken by lowest basic index.
  /// Returns false at optimality.
  bool step() {
    int pc = -1;
    for (int c = 0; c < cols; ++c) {
      if (t(rows, c) < -kPivotTol) {
        pc = c;
        break;
      }
    }
    if (pc < 0) return false;
    int pr = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      if (t(r, pc) > kPivotTol) {
        const double ratio = rhs(r) / t(r, pc);
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && (pr < 0 || basis[r] < basis[pr]))) {
          best = ratio;
          pr = r;
        }
      }
    }
    if (pr < 0) throw NumericalError("simplex: unbounded problem");
    pivot(pr, pc);
    return true;
  }
};

}  // namespace

SimplexResult simplex_min(const Mat& a, const Vec& b, const Vec& c, int max_iterations) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw PreconditionError("simplex: shape mismatch");

  Tableau tab;
  tab.rows = m;
  tab.cols = n + m;
  tab.t = Mat::Zero(m + 1, n + m + 1);
  for (int r = 0; r < m; ++r) {
    const double sgn = b[r] < 0.0 ? -1.0 : 1.0;
    for (int col = 0; col < n; ++col) tab.t(r, col) = sgn * a(r, col);
    tab.t(r, n + r) = 1.0;
    tab.t(r, tab.cols) = sgn * b[r];
    tab.basis.push_back(n + r);
  }

  int iters = 0;
  // Phase 1: minimize the sum of artificials.
  for (int col = 0; col <= tab.cols; ++col) {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += tab.t(r, col);
    tab.t(m, col) = (col >= n && col < n + m) ? 0.0 : -s;
  }
  while (tab.step()) {
    if (++iters > max_iterations) throw NumericalError("simplex: phase-1 iteration cap");
  }
  double art_sum = 0.0;
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] >= n) art_sum += tab.rhs(r);
  if (std::abs(art_sum) > 1e-8) throw PreconditionError("simplex: infeasible system");

  // Drive leftover artificials out of the basis where a structural pivot exists.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n) continue;
    int pc = -1;
    for (int col = 0; col < n; ++col) {
      if (std::abs(tab.t(r, col)) > kPivotTol) {
        pc = col;
        break;
      }
    }
    if (pc >= 0) tab.pivot(r, pc);
    // Otherwise the row is redundant; the artificial stays basic at zero.
  }

  // Phase 2: the real objective; artificial columns are frozen out.
  for (int col = 0; col <= tab.cols; ++col) {
    double red = (col < n) ? c[col] : 0.0;
    for (int r = 0; r < m; ++r) {
      const int bv = tab.basis[r];
      const double cost = bv < n ? c[bv] : 0.0;
      red -= cost * tab.t(r, col);
    }
    tab.t(m, col) = (col >= n && col < n + m) ? 0.0 : red;
  }
  while (true) {
    // Entering restricted to structural columns.
    int pc = -1;
    for (int col = 0; col < n; ++col) {
      if (tab.t(m, col) < -kPivotTol) {
        pc = col;
        break;
      }
    }
    if (pc < 0) break;
    int pr = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (tab.t(r, pc) > kPivotTol) {
        const double ratio = tab.rhs(r) / tab.t(r, pc);
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && (pr < 0 || tab.basis[r] < tab.basis[pr]))) {
          best = ratio;
          pr = r;
        }
      }
    }
    if (pr < 0) throw NumericalError("simplex: unbounded problem");
    tab.pivot(pr, pc);
    if (++iters > max_iterations) throw NumericalError("simplex: phase-2 iteration cap");
  }

  SimplexResult res;
  res.x = Vec::Zero(n);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.rhs(r);
  res.objective = c.dot(res.x);
  res.iterations = iters;
  double cs = 0.0;
  for (int col = 0; col < n; ++col) cs = std::max(cs, std::abs(res.x[col] * tab.t(m, col)));
  cs = std::max(cs, (a * res.x - b).cwiseAbs().maxCoeff());
  res.cs_residual = cs;
  return res;
}

}  // namespace uframe
