#pragma once

#include "uframe/linalg.hpp"

namespace uframe {

/// Result of min c'x s.t. Ax = b, x >= 0.
struct SimplexResult {
  double objective;
  Vec x;
  double cs_residual;  // max complementary-slackness violation at the optimum
  int iterations;
};

/// Dense two-phase simplex with Bland's rule. Throws NumericalError past
/// `max_iterations` pivots and PreconditionError on an infeasible system.
SimplexResult simplex_min(const Mat& a, const Vec& b, const Vec& c,
                          int max_iterations = 20000);

}  // namespace uframe
