#include "rmm/riccati/dre.hpp"

#include "rmm/core/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace rmm {

namespace {

void expect_shape(const Mat& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols)
        throw DimensionError(std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    if (!m.allFinite()) throw ConfigError(std::string(name) + " has non-finite entries");
}

void expect_symmetric(const Mat& m, const char* name) {
    if (symmetry_defect(m) > 1e-12 * std::max(1.0, max_abs(m)))
        throw ConfigError(std::string(name) + " is not symmetric");
}

}  // namespace

void BlockSpec::validate(std::span<const double> times) const {
    if (d <= 0 || r <= 0) throw DimensionError("block dimensions must be positive");
    if (!(rho > 0) || !std::isfinite(rho)) throw ConfigError("rho must be positive and finite");
    if (!Q11 || !Y11 || !Y21 || !U11 || !U22) throw ConfigError("block coefficient missing");
    expect_shape(Psi, d, d, "Psi");
    expect_shape(Upsilon, d, r, "Upsilon");
    expect_shape(Gamma, r, r, "Gamma");
    expect_symmetric(Psi, "Psi");
    expect_symmetric(Gamma, "Gamma");
    for (double t : times) {
        Mat q = Q11(t), y11 = Y11(t), y21 = Y21(t), u11 = U11(t), u22 = U22(t);
        expect_shape(q, d, d, "Q11");
        expect_shape(y11, d, d, "Y11");
        expect_shape(y21, r, d, "Y21");
        expect_shape(u11, d, d, "U11");
        expect_shape(u22, r, r, "U22");
        expect_symmetric(q, "Q11");
        expect_symmetric(u11, "U11");
        expect_symmetric(u22, "U22");
    }
}

DRECoefficients DRECoefficients::constant(const Mat& Q, const Mat& Y, const Mat& U,
                                          const Mat& P_T) {
    DRECoefficients c;
    c.n = static_cast<int>(Q.rows());
    c.Q = rmm::constant(Q);
    c.Y = rmm::constant(Y);
    c.U = rmm::constant(U);
    c.P_T = P_T;
    c.validate(0.0);
    return c;
}

void DRECoefficients::validate(double t) const {
    if (n <= 0) throw DimensionError("DRE dimension must be positive");
    if (!Q || !Y || !U) throw ConfigError("DRE coefficient missing");
    expect_shape(P_T, n, n, "P(T)");
    expect_symmetric(P_T, "P(T)");
    Mat q = Q(t), y = Y(t), u = U(t);
    expect_shape(q, n, n, "Q");
    expect_shape(y, n, n, "Y");
    expect_shape(u, n, n, "U");
    expect_symmetric(q, "Q");
    expect_symmetric(u, "U");
}

DRECoefficients assemble_from_blocks(const BlockSpec& spec) {
    spec.validate(std::array<double, 1>{0.0});
    const int d = spec.d, r = spec.r, n = d + r;
    DRECoefficients c;
    c.n = n;
    c.Q = [spec, d, n](double t) {
        Mat q = Mat::Zero(n, n);
        q.topLeftCorner(d, d) = spec.Q11(t);
        return q;
    };
    c.Y = [spec, d, r, n](double t) {
        Mat y = Mat::Zero(n, n);
        y.topLeftCorner(d, d) = spec.Y11(t);
        y.bottomLeftCorner(r, d) = spec.Y21(t);
        return y;
    };
    c.U = [spec, d, r, n](double t) {
        Mat u = Mat::Zero(n, n);
        u.topLeftCorner(d, d) = spec.rho * spec.U11(t);
        u.bottomRightCorner(r, r) = -spec.U22(t);
        return u;
    };
    Mat pt(n, n);
    pt.topLeftCorner(d, d) = spec.Psi;
    pt.topRightCorner(d, r) = 0.5 * spec.Upsilon;
    pt.bottomLeftCorner(r, d) = 0.5 * spec.Upsilon.transpose();
    pt.bottomRightCorner(r, r) = spec.Gamma;
    c.P_T = -pt;
    c.block = spec;
    return c;
}

Mat dre_rhs(const DRECoefficients& c, double t, const Mat& P) {
    Mat y = c.Y(t);
    Mat py = P * y;
    return c.Q(t) + py.transpose() + py + P * c.U(t) * P;
}

namespace {

void guard(const Mat& P, double t, double cap) {
    const double nrm = inf_norm(P);
    if (!std::isfinite(nrm) || nrm > cap) throw BlowUp(t, nrm);
}

Mat rk4_step(const DRECoefficients& c, double t, double h, const Mat& P) {
    // Integrates from t to t - h.
    Mat k1 = dre_rhs(c, t, P);
    Mat k2 = dre_rhs(c, t - 0.5 * h, P - 0.5 * h * k1);
    Mat k3 = dre_rhs(c, t - 0.5 * h, P - 0.5 * h * k2);
    Mat k4 = dre_rhs(c, t - h, P - h * k3);
    return P - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat implicit_euler_step(const DRECoefficients& c, double t, double h, const Mat& P,
                        const SolverOptions& opts) {
    // X = P - h F(t - h, X), solved by fixed-point iteration.
    const double tn = t - h;
    Mat X = P - h * dre_rhs(c, t, P);
    for (int it = 1; it <= opts.implicit_max_iter; ++it) {
        Mat next = symmetrize(P - h * dre_rhs(c, tn, X));
        const double delta = max_abs(next - X);
        X = std::move(next);
        if (!X.allFinite()) throw BlowUp(tn, INFINITY);
        if (delta <= opts.implicit_tol * std::max(1.0, max_abs(X))) return X;
    }
    throw NoConvergence("implicit Euler fixed point did not converge", tn, opts.implicit_max_iter);
}

}  // namespace

RiccatiSolution solve_dre(const DRECoefficients& c, std::span<const double> grid,
                          const SolverOptions& opts) {
    if (grid.size() < 2) throw ConfigError("time grid needs at least two points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ConfigError("time grid must be strictly increasing");
    c.validate(grid.back());

    RiccatiSolution sol;
    sol.grid.assign(grid.begin(), grid.end());
    sol.scheme = opts.scheme;
    sol.block = c.block;
    const std::size_t N = grid.size();
    sol.P.resize(N);
    sol.P[N - 1] = symmetrize(c.P_T);
    guard(sol.P[N - 1], grid[N - 1], opts.norm_cap);
    for (std::size_t k = N - 1; k > 0; --k) {
        const double t = grid[k];
        const double h = grid[k] - grid[k - 1];
        Mat next = opts.scheme == Scheme::ExplicitRK4 ? rk4_step(c, t, h, sol.P[k])
                                                      : implicit_euler_step(c, t, h, sol.P[k], opts);
        sol.max_symmetry_defect = std::max(sol.max_symmetry_defect, symmetry_defect(next));
        next = symmetrize(next);
        guard(next, grid[k - 1], opts.norm_cap);
        sol.P[k - 1] = std::move(next);
    }
    sol.max_residual = dre_residual(c, grid, sol.P);
    return sol;
}

double dre_residual(const DRECoefficients& c, std::span<const double> grid,
                    const std::vector<Mat>& P) {
    const std::size_t n = grid.size();
    double worst = 0.0;
    auto check = [&](std::size_t i, const Mat& fd) {
        const double res = max_abs(fd - dre_rhs(c, grid[i], P[i])) / std::max(1.0, inf_norm(P[i]));
        worst = std::max(worst, res);
    };
    if (n < 5) {
        for (std::size_t i = 1; i + 1 < n; ++i) check(i, (P[i + 1] - P[i - 1]) / (grid[i + 1] - grid[i - 1]));
        return worst;
    }
    // Fourth-order central stencil where the four spacings agree, second order otherwise.
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double h = grid[i + 1] - grid[i];
        bool uniform = true;
        for (std::size_t k = i - 2; k < i + 2; ++k)
            uniform = uniform && std::abs(grid[k + 1] - grid[k] - h) <= 1e-9 * h;
        if (uniform) check(i, (P[i - 2] - P[i + 2] + 8.0 * (P[i + 1] - P[i - 1])) / (12.0 * h));
        else check(i, (P[i + 1] - P[i - 1]) / (grid[i + 1] - grid[i - 1]));
    }
    return worst;
}

}  // namespace rmm
