#include "rmm/mm/linear_terms.hpp"

#include "rmm/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rmm::mm {

double ValueSlice::theta(const Vec& q, const Vec& S) const {
    return q.dot(A * q) + q.dot(B * S) + S.dot(C * S) + D.dot(q) + E.dot(S) + F;
}

Vec ValueSlice::grad_q(const Vec& q, const Vec& S) const {
    return 2.0 * A * q + B * S + D;
}

ValueSlice ApproxValue::node(std::size_t i) const {
    return {grid[i], A[i], B[i], C[i], D[i], E[i], F[i]};
}

ValueSlice ApproxValue::at(double t) const {
    if (t <= grid.front()) return node(0);
    if (t >= grid.back()) return node(grid.size() - 1);
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - grid.begin());
    const std::size_t i = j - 1;
    const double w = (t - grid[i]) / (grid[j] - grid[i]);
    auto mix = [w](const auto& a, const auto& b) { return (1.0 - w) * a + w * b; };
    return {t,
            mix(A[i], A[j]),
            mix(B[i], B[j]),
            mix(C[i], C[j]),
            mix(D[i], D[j]),
            mix(E[i], E[j]),
            (1.0 - w) * F[i] + w * F[j]};
}

ApproxValue split_abc(const RiccatiSolution& abc, int r, int d) {
    ApproxValue v;
    v.r = r;
    v.d = d;
    v.grid = abc.grid;
    const std::size_t n = abc.grid.size();
    v.A.reserve(n);
    v.B.reserve(n);
    v.C.reserve(n);
    for (const Mat& P : abc.P) {
        if (P.rows() != r + d) throw DimensionError("Riccati path has the wrong dimension");
        v.A.push_back(P.topLeftCorner(r, r));
        v.B.push_back(2.0 * P.topRightCorner(r, d));
        v.C.push_back(P.bottomRightCorner(d, d));
    }
    v.D.assign(n, Vec::Zero(r));
    v.E.assign(n, Vec::Zero(d));
    v.F.assign(n, 0.0);
    return v;
}

namespace {

struct Sources {
    Vec dv11;   // v11 bid - ask
    Vec dv22;   // v22 bid - ask
    Vec v01, v12, v21, v23;  // bid + ask
};

Sources sources(const Moments& m) {
    return {m.bid.v11 - m.ask.v11, m.bid.v22 - m.ask.v22, m.bid.v01 + m.ask.v01,
            m.bid.v12 + m.ask.v12, m.bid.v21 + m.ask.v21, m.bid.v23 + m.ask.v23};
}

struct DEF {
    Vec D;
    Vec E;
    double F = 0.0;
};

struct Frozen {
    Mat A, B, C, R;
};

}  // namespace

ApproxValue solve_def(const RiccatiSolution& abc, const QuadraticModel& m) {
    const int r = m.r, d = m.d;
    if (abc.grid.size() < 2) throw ConfigError("grid must have at least two points");
    if (std::abs(abc.grid.back() - m.T) > 1e-9 * std::max(1.0, m.T))
        throw ConfigError("grid mismatch: Riccati path does not end at the horizon");
    ApproxValue v = split_abc(abc, r, d);

    const Sources src = sources(m.moments);
    const Mat J = m.J();
    const Mat W = m.W();
    const Mat Sigma = m.Sigma;
    const double rho = m.rho;
    const Vec& Sbar = m.Sbar;
    const DRECoefficients dre = build_quadratic_dre(m);

    auto rhs = [&](const Frozen& f, const DEF& y) {
        const Vec a = f.A.diagonal();
        const Vec RSbar = f.R * Sbar;
        const Mat BJ = f.B + J;
        DEF dy;
        dy.D = -BJ * RSbar + rho * BJ * (Sigma * y.E) - f.A * (W * y.D) +
               2.0 * f.A * src.dv11 - 2.0 * f.A * src.dv22.cwiseProduct(a);
        dy.E = -2.0 * f.C * RSbar + f.R.transpose() * y.E + 2.0 * rho * f.C * (Sigma * y.E) -
               0.5 * f.B.transpose() * (W * y.D) + f.B.transpose() * src.dv11 -
               f.B.transpose() * src.dv22.cwiseProduct(a);
        const double hamiltonians = src.v01.sum() - src.dv11.dot(y.D) - src.v12.dot(a) +
                                    0.5 * y.D.dot(src.v21.cwiseProduct(y.D)) +
                                    y.D.dot(src.dv22.cwiseProduct(a)) +
                                    0.5 * a.dot(src.v23.cwiseProduct(a));
        dy.F = -RSbar.dot(y.E) - (Sigma * f.C).trace() + 0.5 * rho * y.E.dot(Sigma * y.E) -
               0.25 * y.D.dot(m.eta_inv * y.D) - hamiltonians;
        return dy;
    };
    auto frozen = [&](const Mat& P, double t) {
        return Frozen{P.topLeftCorner(r, r), 2.0 * P.topRightCorner(r, d), P.bottomRightCorner(d, d), m.R(t)};
    };
    auto axpy = [](const DEF& y, double h, const DEF& k) {
        return DEF{y.D + h * k.D, y.E + h * k.E, y.F + h * k.F};
    };

    const std::size_t n = v.grid.size();
    DEF y{Vec::Zero(r), Vec::Zero(d), 0.0};
    Mat P_hi = abc.P[n - 1];
    Mat dP_hi = dre_rhs(dre, v.grid[n - 1], P_hi);
    for (std::size_t i = n - 1; i-- > 0;) {
        const double h = v.grid[i + 1] - v.grid[i];
        const Mat& P_lo = abc.P[i];
        const Mat dP_lo = dre_rhs(dre, v.grid[i], P_lo);
        // cubic Hermite midpoint of the Riccati path
        const Mat P_mid = 0.5 * (P_lo + P_hi) + 0.125 * h * (dP_lo - dP_hi);
        const Frozen hi = frozen(P_hi, v.grid[i + 1]);
        const Frozen mid = frozen(P_mid, 0.5 * (v.grid[i] + v.grid[i + 1]));
        const Frozen lo = frozen(P_lo, v.grid[i]);
        const DEF k1 = rhs(hi, y);
        const DEF k2 = rhs(mid, axpy(y, -0.5 * h, k1));
        const DEF k3 = rhs(mid, axpy(y, -0.5 * h, k2));
        const DEF k4 = rhs(lo, axpy(y, -h, k3));
        y.D -= h / 6.0 * (k1.D + 2.0 * k2.D + 2.0 * k3.D + k4.D);
        y.E -= h / 6.0 * (k1.E + 2.0 * k2.E + 2.0 * k3.E + k4.E);
        y.F -= h / 6.0 * (k1.F + 2.0 * k2.F + 2.0 * k3.F + k4.F);
        if (!y.D.allFinite() || !y.E.allFinite() || !std::isfinite(y.F))
            throw BlowUp(v.grid[i], INFINITY);
        v.D[i] = y.D;
        v.E[i] = y.E;
        v.F[i] = y.F;
        P_hi = P_lo;
        dP_hi = dP_lo;
    }
    return v;
}

ApproxValue solve_approx_value(const QuadraticModel& m, std::span<const double> grid,
                               const SolverOptions& opts) {
    const RiccatiSolution sol = solve_dre(build_quadratic_dre(m), grid, opts);
    return solve_def(sol, m);
}

}  // namespace rmm::mm
