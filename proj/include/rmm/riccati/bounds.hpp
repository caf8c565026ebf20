#pragma once

#include "rmm/riccati/dre.hpp"

namespace rmm {

/// Quadratic lower and upper bounds on P(t) in the (x, y) block ordering.
struct AprioriBounds {
    double t = 0.0;
    Mat lower;
    Mat upper;
};

/// Bounds at time t for the block problem on [t, T]; integrals use the given step.
/// Requires commuting Y11 and invertible B Sigma B^T for the upper bound.
AprioriBounds apriori_bounds(const BlockSpec& spec, double t, double T, double step = 1e-2);

struct BoundCheck {
    double lower_slack = 0.0;  // min eigenvalue of P - lower
    double upper_slack = 0.0;  // min eigenvalue of upper - P
    bool lower_ok = false;
    bool upper_ok = false;
};

BoundCheck check_bounds(const AprioriBounds& b, const Mat& P, double tol = 1e-8);

}  // namespace rmm
