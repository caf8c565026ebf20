#include "rmm/riccati/transforms.hpp"

#include "rmm/core/errors.hpp"

namespace rmm {

DRECoefficients shift_coefficients(const DRECoefficients& c, const Mat& K) {
    if (K.rows() != c.n || K.cols() != c.n) throw DimensionError("shift K has the wrong shape");
    if (symmetry_defect(K) > 1e-12 * std::max(1.0, max_abs(K)))
        throw ConfigError("shift K must be symmetric");
    DRECoefficients out;
    out.n = c.n;
    auto Q = c.Q, Y = c.Y, U = c.U;
    out.Q = [Q, Y, U, K](double t) {
        Mat y = Y(t);
        Mat ky = K * y;
        return Mat(Q(t) + K * U(t) * K + ky + ky.transpose());
    };
    out.Y = [Y, U, K](double t) { return Mat(Y(t) + U(t) * K); };
    out.U = U;
    out.P_T = c.P_T - K;
    return out;
}

TransformedProblem transform_shift(const RiccatiSolution& sol, const DRECoefficients& c,
                                   const Mat& K) {
    TransformedProblem tp{shift_coefficients(c, K), {}};
    tp.solution.grid = sol.grid;
    tp.solution.scheme = sol.scheme;
    tp.solution.P.reserve(sol.P.size());
    for (const Mat& p : sol.P) tp.solution.P.push_back(p - K);
    tp.solution.max_residual = dre_residual(tp.coeffs, tp.solution.grid, tp.solution.P);
    return tp;
}

DRECoefficients congruence_coefficients(const DRECoefficients& c, const MatFn& Z,
                                        std::optional<MatFn> dZ) {
    if (!Z) throw ConfigError("congruence Z missing");
    MatFn dz = dZ ? *dZ : MatFn([Z](double t) {
        const double h = 1e-6 * std::max(1.0, std::abs(t));
        return Mat((Z(t + h) - Z(t - h)) / (2.0 * h));
    });
    DRECoefficients out;
    out.n = c.n;
    auto Q = c.Q, Y = c.Y, U = c.U;
    out.Q = [Q, Z](double t) {
        Mat z = Z(t);
        return symmetrize(z.transpose() * Q(t) * z);
    };
    out.Y = [Y, Z, dz](double t) {
        Mat z = Z(t);
        Mat zi = checked_inverse(z, "congruence Z");
        return Mat(zi * Y(t) * z + zi * dz(t));
    };
    out.U = [U, Z](double t) {
        Mat zi = checked_inverse(Z(t), "congruence Z");
        return symmetrize(zi * U(t) * zi.transpose());
    };
    return out;
}

TransformedProblem transform_congruence(const RiccatiSolution& sol, const DRECoefficients& c,
                                        const MatFn& Z, std::optional<MatFn> dZ) {
    TransformedProblem tp{congruence_coefficients(c, Z, std::move(dZ)), {}};
    const double T = sol.grid.back();
    Mat zT = Z(T);
    if (zT.rows() != c.n || zT.cols() != c.n) throw DimensionError("congruence Z has the wrong shape");
    tp.coeffs.P_T = symmetrize(zT.transpose() * c.P_T * zT);
    tp.solution.grid = sol.grid;
    tp.solution.scheme = sol.scheme;
    tp.solution.P.reserve(sol.P.size());
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        Mat z = Z(sol.grid[i]);
        checked_inverse(z, "congruence Z");
        tp.solution.P.push_back(symmetrize(z.transpose() * sol.P[i] * z));
    }
    tp.solution.max_residual = dre_residual(tp.coeffs, tp.solution.grid, tp.solution.P);
    return tp;
}

Mat block_swap(int d, int r) {
    Mat p = Mat::Zero(d + r, d + r);
    // New coordinates (y, x) from old (x, y): old = Z new.
    p.block(0, r, d, d).setIdentity();
    p.block(d, 0, r, r).setIdentity();
    return p;
}

}  // namespace rmm
