#include "fixtures.hpp"
#include "oracles.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/mm/linear_terms.hpp"
#include "rmm/mm/model.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rmm;
using namespace rmm::mm;

namespace {

MMConfig asymmetric_two_assets() {
    MMConfig c = fixtures::two_assets(2.0);
    c.market.Sbar << 100.0, 101.0;
    c.market.R << 0.5, -0.3, -0.2, 0.4;
    c.Gamma = 1e-3 * Mat::Identity(2, 2);
    c.eta = 50.0 * Mat::Identity(2, 2);
    c.flows[1].intensity = IntensityModel::logistic(20.0, 0.4, 25.0);
    c.flows[2].sizes = SizeDistribution{{50.0, 150.0}, {0.6, 0.4}};
    return c;
}

MMConfig zero_flow(MMConfig c) {
    for (Flow& f : c.flows) f.intensity = IntensityModel::logistic(0.0, 0.0, 1.0);
    return c;
}

}  // namespace

TEST(MMDre, SingleAssetBlocks) {
    const MMConfig cfg = fixtures::single_asset(0.0);
    const Moments mo = aggregate_moments(cfg);
    const DRECoefficients c = build_mm_dre(cfg, mo);
    const double rho = cfg.rho, s2 = 1.44;
    const double v = mo.bid.v21[0] + mo.ask.v21[0];
    Mat Q(2, 2), Y(2, 2), U(2, 2);
    Q << 0.5 * rho * s2, 0, 0, 0;
    Y << 0, 0, rho * s2, 0;
    U << -2.0 * v, 0, 0, 2.0 * rho * s2;
    EXPECT_LE(max_abs(c.Q(0.0) - Q), 1e-18);
    EXPECT_LE(max_abs(c.Y(0.0) - Y), 1e-18);
    EXPECT_LE(max_abs(c.U(0.0) - U), 1e-15);
    EXPECT_EQ(max_abs(c.P_T), 0.0);
}

TEST(MMDre, MomentsOfOnePointMeasure) {
    MMConfig cfg = fixtures::single_asset(0.0);
    for (Flow& f : cfg.flows) f.sizes = SizeDistribution::single(100.0);
    const Moments mo = aggregate_moments(cfg);
    const TaylorAlphas a = taylor_alphas(fixtures::logistic_flow(), cfg.rho, 100.0);
    EXPECT_NEAR(mo.bid.v01[0], 100.0 * a.a0, 1e-12);
    EXPECT_NEAR(mo.bid.v11[0], 100.0 * a.a1, 1e-12);
    EXPECT_NEAR(mo.bid.v12[0], 1e4 * a.a1, 1e-9);
    EXPECT_NEAR(mo.bid.v21[0], 100.0 * a.a2, 1e-12);
    EXPECT_NEAR(mo.bid.v22[0], 1e4 * a.a2, 1e-9);
    EXPECT_NEAR(mo.bid.v23[0], 1e6 * a.a2, 1e-6);
}

TEST(MMDre, MomentSigns) {
    const Moments mo = aggregate_moments(fixtures::two_assets());
    for (int i = 0; i < 2; ++i) {
        EXPECT_GT(mo.bid.v21[i], 0.0);
        EXPECT_GT(mo.ask.v21[i], 0.0);
        EXPECT_EQ(mo.bid.v21[i], mo.ask.v21[i]);
    }
    const Moments zero = aggregate_moments(zero_flow(fixtures::two_assets()));
    EXPECT_EQ(zero.bid.v01.norm() + zero.bid.v21.norm() + zero.ask.v23.norm(), 0.0);
}

TEST(MMDre, MatchesCoupledSystem) {
    for (const MMConfig& cfg : {fixtures::two_assets(), asymmetric_two_assets(), fixtures::single_asset(0.1)}) {
        const QuadraticModel m = quadratic_model(cfg, aggregate_moments(cfg));
        const auto grid = grid_with_step(0.0, cfg.T, 1e-3);
        const RiccatiSolution sol = solve_dre(build_quadratic_dre(m), grid);
        const ApproxValue v = split_abc(sol, m.r, m.d);
        const auto coarse = grid_with_step(0.0, cfg.T, 1e-2);
        const oracle::ABCPaths ref =
            oracle::integrate_abc(m.Sigma, m.R, m.W(), m.Gamma, m.rho, m.r, m.d, coarse, 10);
        for (std::size_t i = 0; i < coarse.size(); i += 10) {
            const std::size_t j = i * 10;
            ASSERT_NEAR(grid[j], coarse[i], 1e-12);
            const double scale = std::max({1.0, max_abs(ref.A[i]), max_abs(ref.B[i]), max_abs(ref.C[i])});
            EXPECT_LE(max_abs(v.A[j] - ref.A[i]) / scale, 1e-8);
            EXPECT_LE(max_abs(v.B[j] - ref.B[i]) / scale, 1e-8);
            EXPECT_LE(max_abs(v.C[j] - ref.C[i]) / scale, 1e-8);
        }
    }
}

TEST(MMDre, TerminalValues) {
    const MMConfig cfg = asymmetric_two_assets();
    const QuadraticModel m = quadratic_model(cfg, aggregate_moments(cfg));
    const ApproxValue v = solve_approx_value(m, grid_with_step(0.0, cfg.T, 1e-3));
    EXPECT_LE(max_abs(v.A.back() + cfg.Gamma), 0.0);
    EXPECT_EQ(max_abs(v.B.back()), 0.0);
    EXPECT_EQ(max_abs(v.C.back()), 0.0);
    EXPECT_EQ(v.D.back().norm(), 0.0);
    EXPECT_EQ(v.E.back().norm(), 0.0);
    EXPECT_EQ(v.F.back(), 0.0);
    for (std::size_t i = 0; i < v.grid.size(); ++i) {
        EXPECT_LE(symmetry_defect(v.A[i]), 1e-10);
        EXPECT_LE(symmetry_defect(v.C[i]), 1e-10);
    }
}

TEST(MMDre, ApproximateEquationResidual) {
    for (const MMConfig& cfg : {fixtures::two_assets(), asymmetric_two_assets(), fixtures::single_asset(0.1)}) {
        const QuadraticModel m = quadratic_model(cfg, aggregate_moments(cfg));
        const ApproxValue v = solve_approx_value(m, grid_with_step(0.0, cfg.T, 1e-3));
        const int r = m.r, d = m.d;
        for (std::size_t i : {std::size_t{2}, v.grid.size() / 2, v.grid.size() - 3}) {
            for (double qs : {-200.0, 0.0, 150.0}) {
                Vec q = Vec::Constant(r, qs), S = cfg.market.Sbar + Vec::LinSpaced(d, -1.5, 2.0);
                if (r > 1) q[1] = -0.5 * qs;
                const auto [res, scale] = oracle::approx_hjb_residual(v, cfg, i, q, S);
                EXPECT_LE(std::abs(res), 1e-5 * scale) << "t=" << v.grid[i] << " q=" << qs;
            }
        }
    }
}

TEST(MMDre, SymmetricFlowWithoutDriftHasNoLinearInventoryTerm) {
    const MMConfig cfg = fixtures::single_asset(0.0);
    const QuadraticModel m = quadratic_model(cfg, aggregate_moments(cfg));
    const ApproxValue v = solve_approx_value(m, grid_with_step(0.0, cfg.T, 1e-3));
    for (std::size_t i = 0; i < v.grid.size(); i += 100) {
        EXPECT_EQ(v.D[i].norm(), 0.0);
        EXPECT_EQ(v.E[i].norm(), 0.0);
        EXPECT_EQ(max_abs(v.B[i]), 0.0);
    }
    const MMConfig tilted = fixtures::single_asset(0.1);
    const ApproxValue w = solve_approx_value(quadratic_model(tilted, aggregate_moments(tilted)),
                                             grid_with_step(0.0, tilted.T, 1e-3));
    EXPECT_GT(w.D.front().norm(), 0.0);
}

TEST(MMDre, NoFlowNoPenaltyGivesZeroLinearTerms) {
    const MMConfig cfg = zero_flow(fixtures::two_assets(1.0));
    const QuadraticModel m = quadratic_model(cfg, aggregate_moments(cfg));
    const ApproxValue v = solve_approx_value(m, grid_with_step(0.0, cfg.T, 1e-3));
    for (std::size_t i = 0; i < v.grid.size(); i += 50) {
        EXPECT_EQ(v.D[i].norm(), 0.0);
        EXPECT_EQ(v.E[i].norm(), 0.0);
    }
}

TEST(MMDre, ConstantTermIsContinuous) {
    const MMConfig cfg = asymmetric_two_assets();
    const ApproxValue v =
        solve_approx_value(quadratic_model(cfg, aggregate_moments(cfg)), grid_with_step(0.0, cfg.T, 1e-3));
    double jump = 0.0;
    for (std::size_t i = 1; i < v.F.size(); ++i) jump = std::max(jump, std::abs(v.F[i] - v.F[i - 1]));
    const double range = std::abs(v.F.front() - v.F.back());
    EXPECT_LE(jump, 5.0 * range / static_cast<double>(v.F.size() - 1));
}

TEST(MMDre, ValueSliceInterpolates) {
    const MMConfig cfg = fixtures::two_assets(1.0);
    const ApproxValue v =
        solve_approx_value(quadratic_model(cfg, aggregate_moments(cfg)), grid_with_step(0.0, cfg.T, 1e-2));
    const ValueSlice a = v.node(3), b = v.node(4), mid = v.at(0.5 * (v.grid[3] + v.grid[4]));
    EXPECT_LE(max_abs(mid.A - 0.5 * (a.A + b.A)), 1e-15);
    EXPECT_NEAR(mid.F, 0.5 * (a.F + b.F), 1e-10);
    const Vec q = Vec::Constant(2, 10.0), S = Vec::Constant(2, 100.0);
    EXPECT_LE((a.grad_q(q, S) - (2.0 * a.A * q + a.B * S + a.D)).norm(), 0.0);
    EXPECT_NEAR(a.theta(q, S), q.dot(a.A * q) + q.dot(a.B * S) + S.dot(a.C * S) + a.D.dot(q) + a.E.dot(S) + a.F,
                1e-9);
}

TEST(MMDre, GridMismatchRejected) {
    const MMConfig cfg = fixtures::single_asset(0.0, 1e-3, 1.0);
    const QuadraticModel m = quadratic_model(cfg, aggregate_moments(cfg));
    const RiccatiSolution sol = solve_dre(build_quadratic_dre(m), uniform_grid(0.0, 0.5, 50));
    EXPECT_THROW(solve_def(sol, m), ConfigError);
}

TEST(MMDre, IndefiniteFlowCurvatureRejected) {
    const MMConfig cfg = fixtures::single_asset(0.0);
    QuadraticModel m = quadratic_model(cfg, aggregate_moments(cfg));
    m.moments.bid.v21[0] = -1e5;
    m.moments.ask.v21[0] = -1e5;
    EXPECT_THROW(build_quadratic_dre(m), NotPSD);
}

TEST(MMDre, ConfigValidation) {
    MMConfig dup = fixtures::single_asset(0.0);
    dup.flows.push_back(dup.flows[0]);
    EXPECT_THROW(dup.validate(), ConfigError);
    MMConfig missing = fixtures::single_asset(0.0);
    missing.flows.pop_back();
    try {
        missing.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("missing flow for asset 0, tier 0, ask"), std::string::npos);
    }
    MMConfig bad_eta = fixtures::single_asset(0.0);
    bad_eta.eta = Mat::Constant(1, 1, -1.0);
    EXPECT_THROW(bad_eta.validate(), NotPSD);
    MMConfig bad_T = fixtures::single_asset(0.0);
    bad_T.T = 0.0;
    EXPECT_THROW(bad_T.validate(), ConfigError);
    MMConfig bad_dim = fixtures::two_assets();
    bad_dim.Gamma = Mat::Zero(1, 1);
    EXPECT_THROW(bad_dim.validate(), DimensionError);
}

TEST(MMDre, SelectorAndCovariance) {
    MultiOUMarket m = fixtures::two_assets().market;
    m.d = 3;
    m.r = 2;
    m.S0 = Vec::Constant(3, 1.0);
    m.Sbar = Vec::Constant(3, 1.0);
    m.R = Mat::Identity(3, 3);
    m.V = fixtures::random_matrix(*std::make_unique<std::mt19937_64>(3), 3, 2);
    const Mat J = m.J();
    EXPECT_EQ(J.rows(), 2);
    EXPECT_EQ(J.cols(), 3);
    EXPECT_EQ(J.sum(), 2.0);
    EXPECT_EQ(J(0, 0), 1.0);
    EXPECT_EQ(J(1, 1), 1.0);
    EXPECT_LE(max_abs(J * m.Sigma() * J.transpose() - m.Sigma().topLeftCorner(2, 2)), 0.0);
    EXPECT_NO_THROW(m.validate());
}
