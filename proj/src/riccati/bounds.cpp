#include "rmm/riccati/bounds.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/riccati/assumptions.hpp"

#include <cmath>

namespace rmm {

namespace {

Mat derivative_B(const BlockSpec& spec, double s, double T) {
    const double h = 1e-6 * std::max(1.0, std::abs(s));
    const double lo = std::max(0.0, s - h), hi = std::min(T, s + h);
    if (!(hi > lo)) return Mat::Zero(spec.r, spec.d);
    return (control_blocks(spec, hi).B - control_blocks(spec, lo).B) / (hi - lo);
}

// Linear right-hand side of the upper-bound ODE for M1.
Mat upper_rhs(const BlockSpec& spec, double s, double T, const Mat& M) {
    ControlBlocks cb = control_blocks(spec, s);
    Mat rbar = derivative_B(spec, s, T) + cb.B * cb.R;
    Mat bsb = cb.B * cb.Sigma * cb.B.transpose();
    Mat bsb_inv = checked_inverse(bsb, "B Sigma B^T");
    Mat rcheck = rbar.transpose() * bsb_inv * rbar;
    Mat rtilde = -cb.R.transpose() + rbar.transpose() * bsb_inv * cb.B * cb.Sigma;
    return -rcheck / (2.0 * spec.rho) + rtilde * M + M * rtilde.transpose();
}

}  // namespace

AprioriBounds apriori_bounds(const BlockSpec& spec, double t, double T, double step) {
    if (!(T > t)) throw ConfigError("bounds need t < T");
    if (!(step > 0)) throw ConfigError("quadrature step must be positive");
    const int d = spec.d, r = spec.r;
    const std::vector<double> s = grid_with_step(t, T, step);
    const std::size_t N = s.size();
    spec.validate(s);

    // E[k] = exp(int_t^{s_k} R), with R = -Y11 commuting over the grid.
    std::vector<Mat> R(N), C(N), Sig(N), E(N), Einv(N);
    for (std::size_t k = 0; k < N; ++k) {
        ControlBlocks cb = control_blocks(spec, s[k]);
        R[k] = cb.R;
        C[k] = cb.C;
        Sig[k] = cb.Sigma;
    }
    for (std::size_t k = 1; k < N; ++k) {
        for (std::size_t ref : {std::size_t{0}, N / 2, N - 1}) {
            const double c = max_abs(R[k] * R[ref] - R[ref] * R[k]);
            if (c > 1e-10 * std::max(1.0, max_abs(R[k]) * max_abs(R[ref])))
                throw NonCommuting(s[k], s[ref], c);
        }
    }
    Mat integral = Mat::Zero(d, d);
    E[0] = Mat::Identity(d, d);
    Einv[0] = E[0];
    for (std::size_t k = 1; k < N; ++k) {
        integral += 0.5 * (s[k] - s[k - 1]) * (R[k] + R[k - 1]);
        E[k] = expm(integral);
        Einv[k] = expm(-integral);
    }
    const Mat& ET = E[N - 1];

    auto trapezoid = [&](auto&& f) {
        Mat acc = Mat::Zero(f(0).rows(), f(0).cols());
        for (std::size_t k = 1; k < N; ++k) acc += 0.5 * (s[k] - s[k - 1]) * (f(k) + f(k - 1));
        return acc;
    };

    // Covariance of x_T given x_t, and the deterministic quadratic cost of the free state.
    Mat sigma_T = trapezoid([&](std::size_t k) {
        Mat prop = ET * Einv[k];
        return Mat(prop * Sig[k] * prop.transpose());
    });
    Mat r_cost = trapezoid([&](std::size_t k) { return Mat(E[k].transpose() * C[k] * E[k]); });

    // H(u_j) = int_{u_j}^T E_s^T C_s E_s ds * E_j^{-1}; variance of the running-cost noise.
    std::vector<Mat> tail(N);
    tail[N - 1] = Mat::Zero(d, d);
    for (std::size_t k = N - 1; k > 0; --k) {
        Mat f_hi = E[k].transpose() * C[k] * E[k];
        Mat f_lo = E[k - 1].transpose() * C[k - 1] * E[k - 1];
        tail[k - 1] = tail[k] + 0.5 * (s[k] - s[k - 1]) * (f_hi + f_lo);
    }
    Mat sigma_run = trapezoid([&](std::size_t k) {
        Mat h = tail[k] * Einv[k];
        return Mat(h * Sig[k] * h.transpose());
    });
    Mat sigma_term = ET.transpose() * spec.Psi * sigma_T * spec.Psi * ET;

    AprioriBounds out;
    out.t = t;
    out.lower = Mat::Zero(d + r, d + r);
    out.lower.topLeftCorner(d, d) =
        -symmetrize(r_cost + ET.transpose() * spec.Psi * ET + 8.0 * spec.rho * (sigma_run + sigma_term));
    out.lower.topRightCorner(d, r) = -0.5 * ET.transpose() * spec.Upsilon;
    out.lower.bottomLeftCorner(r, d) = out.lower.topRightCorner(d, r).transpose();
    out.lower.bottomRightCorner(r, r) =
        -symmetrize(spec.Gamma + 2.0 * spec.rho * spec.Upsilon.transpose() * sigma_T * spec.Upsilon);

    // Upper bound: linear ODE for M1 backward from zero, RK4 on the same grid.
    Mat M = Mat::Zero(d, d);
    for (std::size_t k = N - 1; k > 0; --k) {
        const double hi = s[k], h = s[k] - s[k - 1];
        Mat k1 = upper_rhs(spec, hi, T, M);
        Mat k2 = upper_rhs(spec, hi - 0.5 * h, T, M - 0.5 * h * k1);
        Mat k3 = upper_rhs(spec, hi - 0.5 * h, T, M - 0.5 * h * k2);
        Mat k4 = upper_rhs(spec, hi - h, T, M - h * k3);
        M = symmetrize(M - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    Mat B = control_blocks(spec, t).B;
    out.upper = Mat::Zero(d + r, d + r);
    out.upper.topLeftCorner(d, d) = M;
    out.upper.topRightCorner(d, r) = 0.5 * B.transpose();
    out.upper.bottomLeftCorner(r, d) = 0.5 * B;
    return out;
}

BoundCheck check_bounds(const AprioriBounds& b, const Mat& P, double tol) {
    BoundCheck c;
    c.lower_slack = min_eigenvalue(P - b.lower);
    c.upper_slack = min_eigenvalue(b.upper - P);
    const double scale = std::max(1.0, max_abs(P));
    c.lower_ok = c.lower_slack >= -tol * scale;
    c.upper_ok = c.upper_slack >= -tol * scale;
    return c;
}

}  // namespace rmm
