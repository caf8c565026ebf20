#pragma once

#include "rmm/leqg/problem.hpp"
#include "rmm/mm/model.hpp"
#include "rmm/mm/sizes.hpp"
#include "rmm/riccati/dre.hpp"

#include <random>

namespace rmm::fixtures {

inline mm::IntensityModel logistic_flow() {
    return mm::IntensityModel::logistic(30.0, 0.7, 30.0);
}

inline mm::SizeDistribution gamma_sizes() {
    return mm::discretize_gamma(4.0, 0.04, 25.0, 10);
}

/// One asset, one tier, symmetric logistic flow, Gamma sizes.
inline mm::MMConfig single_asset(double R, double rho = 1e-3, double T = 7.0) {
    mm::MMConfig c;
    c.market.r = 1;
    c.market.d = 1;
    c.market.S0 = Vec::Constant(1, 100.0);
    c.market.Sbar = Vec::Constant(1, 100.0);
    c.market.R = Mat::Constant(1, 1, R);
    c.market.V = Mat::Constant(1, 1, 1.2);
    c.flows = {{0, 0, mm::Side::Bid, logistic_flow(), gamma_sizes()},
               {0, 0, mm::Side::Ask, logistic_flow(), gamma_sizes()}};
    c.rho = rho;
    c.Gamma = Mat::Zero(1, 1);
    c.T = T;
    return c;
}

/// Two cointegrated assets.
inline mm::MMConfig two_assets(double T = 7.0) {
    mm::MMConfig c;
    c.market.r = 2;
    c.market.d = 2;
    c.market.S0 = Vec::Constant(2, 100.0);
    c.market.Sbar = Vec::Constant(2, 100.0);
    c.market.R.resize(2, 2);
    c.market.R << 0.5, -0.5, -0.5, 0.5;
    c.market.V = Mat::Identity(2, 2);
    for (int a = 0; a < 2; ++a)
        for (mm::Side s : {mm::Side::Bid, mm::Side::Ask})
            c.flows.push_back({a, 0, s, logistic_flow(), gamma_sizes()});
    c.rho = 5e-3;
    c.Gamma = Mat::Zero(2, 2);
    c.T = T;
    return c;
}

inline Mat random_matrix(std::mt19937_64& g, int rows, int cols, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = u(g);
    return m;
}

inline Mat random_spd(std::mt19937_64& g, int n, double floor = 0.2, double scale = 1.0) {
    const Mat a = random_matrix(g, n, n, scale);
    return a * a.transpose() + floor * Mat::Identity(n, n);
}

inline Mat random_symmetric(std::mt19937_64& g, int n, double scale = 1.0) {
    const Mat a = random_matrix(g, n, n, scale);
    return 0.5 * (a + a.transpose());
}

/// Small random DRE with time-dependent coefficients that stays bounded on [0, T].
inline DRECoefficients random_dre(std::mt19937_64& g, int n) {
    const Mat Q0 = random_symmetric(g, n, 0.5), Q1 = random_symmetric(g, n, 0.3);
    const Mat Y0 = random_matrix(g, n, n, 0.5), Y1 = random_matrix(g, n, n, 0.3);
    const Mat U0 = random_symmetric(g, n, 0.3);
    DRECoefficients c;
    c.n = n;
    c.Q = [=](double t) -> Mat { return Q0 + std::sin(t) * Q1; };
    c.Y = [=](double t) -> Mat { return Y0 + t * Y1; };
    c.U = [=](double) -> Mat { return U0; };
    c.P_T = random_symmetric(g, n, 0.5);
    return c;
}

/// d = r = 1 LEQG instance.
inline leqg::Problem leqg_scalar() {
    leqg::Problem p;
    p.d = 1;
    p.r = 1;
    p.A = constant(Mat::Constant(1, 1, 1.0));
    p.B = constant(Mat::Constant(1, 1, 0.5));
    p.C = constant(Mat::Constant(1, 1, 0.3));
    p.R = constant(Mat::Constant(1, 1, -0.4));
    p.V = constant(Mat::Constant(1, 1, 0.8));
    p.rho = 0.5;
    p.T = 0.5;
    p.Psi = Mat::Constant(1, 1, 0.2);
    p.Upsilon = Mat::Constant(1, 1, 0.3);
    p.Gamma = Mat::Constant(1, 1, 0.5);
    p.x0 = Vec::Constant(1, 1.0);
    p.y0 = Vec::Constant(1, -0.5);
    p.z0 = 0.0;
    return p;
}

/// d = 2, r = 1 LEQG instance.
inline leqg::Problem leqg_two_state() {
    leqg::Problem p;
    p.d = 2;
    p.r = 1;
    p.A = constant(Mat::Constant(1, 1, 1.5));
    Mat B(1, 2);
    B << 0.4, -0.2;
    p.B = constant(B);
    Mat C(2, 2);
    C << 0.3, 0.05, 0.05, 0.2;
    p.C = constant(C);
    Mat R(2, 2);
    R << -0.5, 0.1, 0.0, -0.3;
    p.R = constant(R);
    Mat V(2, 2);
    V << 0.7, 0.0, 0.2, 0.5;
    p.V = constant(V);
    p.rho = 0.4;
    p.T = 0.5;
    p.Psi = 0.1 * Mat::Identity(2, 2);
    p.Upsilon = Mat(2, 1);
    p.Upsilon << 0.2, -0.1;
    p.Gamma = Mat::Constant(1, 1, 0.4);
    p.x0 = Vec(2);
    p.x0 << 1.0, -0.5;
    p.y0 = Vec::Constant(1, 0.5);
    p.z0 = 0.0;
    return p;
}

}  // namespace rmm::fixtures
