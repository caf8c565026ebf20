#pragma once

#include "rmm/core/linalg.hpp"

#include <optional>
#include <span>
#include <vector>

namespace rmm {

/// Block coefficients of the structured Riccati problem, ordered (x, y) with
/// dim x = d and dim y = r.
struct BlockSpec {
    int d = 0;
    int r = 0;
    double rho = 0.0;
    MatFn Q11;  // d x d
    MatFn Y11;  // d x d
    MatFn Y21;  // r x d
    MatFn U11;  // d x d, scaled by rho in the assembled U
    MatFn U22;  // r x r
    Mat Psi;      // d x d
    Mat Upsilon;  // d x r
    Mat Gamma;    // r x r

    /// Shape, finiteness and symmetry checks at the given times.
    void validate(std::span<const double> times) const;
};

/// dP/dt = Q(t) + Y(t)^T P + P Y(t) + P U(t) P,  P(T) = P_T.
struct DRECoefficients {
    int n = 0;
    MatFn Q;
    MatFn Y;
    MatFn U;
    Mat P_T;
    std::optional<BlockSpec> block;

    static DRECoefficients constant(const Mat& Q, const Mat& Y, const Mat& U, const Mat& P_T);
    void validate(double t) const;
};

DRECoefficients assemble_from_blocks(const BlockSpec& spec);

Mat dre_rhs(const DRECoefficients& c, double t, const Mat& P);

enum class Scheme { ExplicitRK4, ImplicitEuler };

struct SolverOptions {
    Scheme scheme = Scheme::ExplicitRK4;
    double norm_cap = 1e12;
    double implicit_tol = 1e-12;
    int implicit_max_iter = 100;
};

struct RiccatiSolution {
    std::vector<double> grid;
    std::vector<Mat> P;
    Scheme scheme = Scheme::ExplicitRK4;
    double max_residual = 0.0;
    double max_symmetry_defect = 0.0;
    std::optional<BlockSpec> block;

    Mat at(double t) const { return interpolate(grid, P, t); }
    double horizon() const { return grid.back(); }
};

/// Backward integration from P_T on the (ascending) grid. Throws BlowUp or NoConvergence.
RiccatiSolution solve_dre(const DRECoefficients& c, std::span<const double> grid,
                          const SolverOptions& opts = {});

/// Max over interior nodes of |central difference - rhs|, scaled by max(1, |P|_inf). The
/// difference is the five-point stencil wherever the local spacing is uniform.
double dre_residual(const DRECoefficients& c, std::span<const double> grid,
                    const std::vector<Mat>& P);

}  // namespace rmm
