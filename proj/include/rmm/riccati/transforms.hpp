#pragma once

#include "rmm/riccati/dre.hpp"

#include <optional>

namespace rmm {

struct TransformedProblem {
    DRECoefficients coeffs;
    RiccatiSolution solution;
};

/// P~ = P - K for constant symmetric K.
DRECoefficients shift_coefficients(const DRECoefficients& c, const Mat& K);
TransformedProblem transform_shift(const RiccatiSolution& sol, const DRECoefficients& c,
                                   const Mat& K);

/// P~ = Z^T P Z for invertible Z(t). Z' is finite-differenced when not supplied.
DRECoefficients congruence_coefficients(const DRECoefficients& c, const MatFn& Z,
                                        std::optional<MatFn> dZ = std::nullopt);
TransformedProblem transform_congruence(const RiccatiSolution& sol, const DRECoefficients& c,
                                        const MatFn& Z, std::optional<MatFn> dZ = std::nullopt);

/// Permutation congruence swapping the (x, y) block order: [[0, I_r], [I_d, 0]].
Mat block_swap(int d, int r);

}  // namespace rmm
