#include "rmm/leqg/value.hpp"

#include "rmm/core/errors.hpp"

#include <cmath>

namespace rmm::leqg {

double ValueCoefficients::theta(double t, const Vec& x, const Vec& y) const {
    Mat m1 = interpolate(grid, M1, t), m2 = interpolate(grid, M2, t), m3 = interpolate(grid, M3, t);
    return x.dot(m1 * x) + x.dot(m2 * y) + y.dot(m3 * y) + interpolate(grid, M6, t);
}

double ValueCoefficients::value(double t, const Vec& x, const Vec& y, double z, double rho) const {
    return -std::exp(-rho * (z + theta(t, x, y)));
}

ValueCoefficients value_coefficients(const RiccatiSolution& sol, int d, int r,
                                     const MatFn& Sigma) {
    if (sol.P.empty() || sol.P.front().rows() != d + r)
        throw DimensionError("Riccati solution does not match (d, r)");
    ValueCoefficients v;
    v.grid = sol.grid;
    const std::size_t N = sol.grid.size();
    v.M1.resize(N);
    v.M2.resize(N);
    v.M3.resize(N);
    v.M6.assign(N, 0.0);
    std::vector<double> trace(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Mat& P = sol.P[i];
        v.M1[i] = P.topLeftCorner(d, d);
        v.M2[i] = 2.0 * P.topRightCorner(d, r);
        v.M3[i] = P.bottomRightCorner(r, r);
        trace[i] = (Sigma(sol.grid[i]) * v.M1[i]).trace();
    }
    // dM6/dt = -Tr(Sigma M1), M6(T) = 0.
    for (std::size_t i = N - 1; i > 0; --i)
        v.M6[i - 1] = v.M6[i] + 0.5 * (sol.grid[i] - sol.grid[i - 1]) * (trace[i] + trace[i - 1]);
    return v;
}

Gains optimal_gains(const Problem& p, const ValueCoefficients& v, double t) {
    Mat ainv = checked_inverse(p.A(t), "A");
    Mat m2 = interpolate(v.grid, v.M2, t);
    Mat m3 = interpolate(v.grid, v.M3, t);
    Gains g;
    g.Kx = 0.5 * ainv * (m2.transpose() - p.B(t));
    g.Ky = ainv * m3;
    g.c = Vec::Zero(p.r);
    return g;
}

Vec optimal_control(const Problem& p, const ValueCoefficients& v, double t, const Vec& x,
                    const Vec& y) {
    if (x.size() != p.d || y.size() != p.r) throw DimensionError("state has the wrong size");
    Gains g = optimal_gains(p, v, t);
    return g.Kx * x + g.Ky * y;
}

ValueCoefficients solve_value(const Problem& p, std::span<const double> grid) {
    DRECoefficients c = assemble_from_blocks(to_block_spec(p));
    RiccatiSolution sol = solve_dre(c, grid);
    return value_coefficients(sol, p.d, p.r, [&p](double t) { return p.Sigma(t); });
}

}  // namespace rmm::leqg
