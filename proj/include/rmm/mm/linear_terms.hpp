#pragma once

#include "rmm/mm/model.hpp"
#include "rmm/riccati/dre.hpp"

namespace rmm::mm {

/// theta(t, q, S) = q'A q + q'B S + S'C S + D'q + E'S + F at one time.
struct ValueSlice {
    double t = 0.0;
    Mat A, B, C;
    Vec D, E;
    double F = 0.0;

    double theta(const Vec& q, const Vec& S) const;
    /// 2 A q + B S + D.
    Vec grad_q(const Vec& q, const Vec& S) const;
};

/// Coefficient paths of the quadratic value function.
struct ApproxValue {
    int r = 0;
    int d = 0;
    std::vector<double> grid;
    std::vector<Mat> A, B, C;
    std::vector<Vec> D, E;
    std::vector<double> F;

    /// Linear interpolation of every coefficient (clamped to the grid).
    ValueSlice at(double t) const;
    ValueSlice node(std::size_t i) const;
    double theta(double t, const Vec& q, const Vec& S) const { return at(t).theta(q, S); }
};

/// Splits P = [[A, B/2], [B'/2, C]] (inventory block first) into A, B, C paths.
ApproxValue split_abc(const RiccatiSolution& abc, int r, int d);

/// Integrates D, E and F backward by RK4, with A, B, C at half steps taken from the cubic
/// Hermite interpolant of the Riccati path. Terminal values are zero.
ApproxValue solve_def(const RiccatiSolution& abc, const QuadraticModel& m);

/// Builds the DRE, solves it and fills in D, E, F.
ApproxValue solve_approx_value(const QuadraticModel& m, std::span<const double> grid,
                               const SolverOptions& opts = {});

}  // namespace rmm::mm
