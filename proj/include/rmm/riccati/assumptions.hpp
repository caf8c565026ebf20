#pragma once

#include "rmm/riccati/dre.hpp"

#include <optional>
#include <span>
#include <utility>

namespace rmm {

/// Control-problem view of a BlockSpec at time t.
struct ControlBlocks {
    Mat A;      // r x r, control cost
    Mat B;      // r x d, cross cost
    Mat C;      // d x d, state cost
    Mat R;      // d x d, state drift
    Mat Sigma;  // d x d, state covariance
};

ControlBlocks control_blocks(const BlockSpec& spec, double t);

struct AssumptionReport {
    bool c_psd = false;
    bool bsb_pd = false;
    bool y11_commute = false;
    bool assumption2 = false;
    double c_min_eigenvalue = 0.0;
    double bsb_min_eigenvalue = 0.0;
    double max_commutator = 0.0;
    std::optional<std::pair<double, double>> commutator_witness;
    std::optional<double> c_failure_time;
    std::optional<double> bsb_failure_time;

    bool assumption1() const { return c_psd && bsb_pd && y11_commute; }
};

AssumptionReport check_assumptions(const BlockSpec& spec, std::span<const double> grid,
                                   double tol = 1e-10);

}  // namespace rmm
