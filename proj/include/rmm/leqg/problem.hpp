#pragma once

#include "rmm/core/linalg.hpp"
#include "rmm/riccati/dre.hpp"

#include <span>

namespace rmm::leqg {

/// Exponential-utility control problem
///   dx = R x dt + V dW,  dy = u dt,  dz = -(u'Au + u'Bx + x'Cx) dt,
///   terminal penalty x'Psi x + y'Upsilon' x + y'Gamma y.
struct Problem {
    int d = 0;
    int r = 0;
    MatFn A;  // r x r, symmetric positive definite
    MatFn B;  // r x d
    MatFn C;  // d x d, symmetric
    MatFn R;  // d x d
    MatFn V;  // d x j
    double rho = 0.0;
    double T = 0.0;
    Mat Psi;
    Mat Upsilon;  // d x r
    Mat Gamma;
    Vec x0;
    Vec y0;
    double z0 = 0.0;

    Mat Sigma(double t) const;
    int noise_dim() const;
    void validate(std::span<const double> times) const;
};

BlockSpec to_block_spec(const Problem& p);

/// Inverse mapping. V is the symmetric square-root factor of U11/2.
Problem from_block_spec(const BlockSpec& spec, double T);

}  // namespace rmm::leqg
