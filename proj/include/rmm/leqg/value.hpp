#pragma once

#include "rmm/leqg/problem.hpp"

#include <vector>

namespace rmm::leqg {

/// theta(t, x, y) = x'M1 x + x'M2 y + y'M3 y + M6, with M6(T) = 0.
struct ValueCoefficients {
    std::vector<double> grid;
    std::vector<Mat> M1;  // d x d
    std::vector<Mat> M2;  // d x r
    std::vector<Mat> M3;  // r x r
    std::vector<double> M6;

    double theta(double t, const Vec& x, const Vec& y) const;
    /// -exp(-rho (z + theta)).
    double value(double t, const Vec& x, const Vec& y, double z, double rho) const;
};

ValueCoefficients value_coefficients(const RiccatiSolution& sol, int d, int r,
                                     const MatFn& Sigma);

/// u = Kx x + Ky y + c.
struct Gains {
    Mat Kx;
    Mat Ky;
    Vec c;
};

Gains optimal_gains(const Problem& p, const ValueCoefficients& v, double t);

Vec optimal_control(const Problem& p, const ValueCoefficients& v, double t, const Vec& x,
                    const Vec& y);

/// Solves the Riccati problem of p on the grid and returns the value coefficients.
ValueCoefficients solve_value(const Problem& p, std::span<const double> grid);

}  // namespace rmm::leqg
