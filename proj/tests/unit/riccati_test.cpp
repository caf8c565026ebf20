#include "fixtures.hpp"
#include "oracles.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/mm/model.hpp"
#include "rmm/riccati/dre.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rmm;

namespace {

// dp/dt = -1 + p^2, p(T) = 0 has p(t) = tanh(T - t).
DRECoefficients tanh_problem() {
    return DRECoefficients::constant(Mat::Constant(1, 1, -1.0), Mat::Zero(1, 1), Mat::Constant(1, 1, 1.0),
                                     Mat::Zero(1, 1));
}

double endpoint_error(Scheme s, std::size_t steps) {
    const double T = 1.0;
    SolverOptions o;
    o.scheme = s;
    const RiccatiSolution sol = solve_dre(tanh_problem(), uniform_grid(0.0, T, steps), o);
    return std::abs(sol.P.front()(0, 0) - std::tanh(T));
}

}  // namespace

TEST(Riccati, ScalarTanhClosedForm) {
    const RiccatiSolution sol = solve_dre(tanh_problem(), uniform_grid(0.0, 2.0, 2000));
    for (std::size_t i = 0; i < sol.grid.size(); i += 100)
        EXPECT_NEAR(sol.P[i](0, 0), std::tanh(2.0 - sol.grid[i]), 1e-12);
    EXPECT_EQ(sol.scheme, Scheme::ExplicitRK4);
}

TEST(Riccati, TerminalConditionIsKept) {
    std::mt19937_64 g(3);
    const DRECoefficients c = fixtures::random_dre(g, 3);
    const RiccatiSolution sol = solve_dre(c, uniform_grid(0.0, 0.5, 100));
    EXPECT_LE(max_abs(sol.P.back() - c.P_T), 1e-15);
}

TEST(Riccati, StepHalvingRK4) {
    const double e1 = endpoint_error(Scheme::ExplicitRK4, 20);
    const double e2 = endpoint_error(Scheme::ExplicitRK4, 40);
    EXPECT_GE(e1 / e2, 3.5);
}

TEST(Riccati, StepHalvingImplicitEuler) {
    const double e1 = endpoint_error(Scheme::ImplicitEuler, 100);
    const double e2 = endpoint_error(Scheme::ImplicitEuler, 200);
    EXPECT_GE(e1 / e2, 1.8);
}

TEST(Riccati, StepHalvingAgainstRefinedReference) {
    std::mt19937_64 g(11);
    const DRECoefficients c = fixtures::random_dre(g, 3);
    const Mat ref = solve_dre(c, uniform_grid(0.0, 1.0, 400)).P.front();
    auto err = [&](Scheme s, std::size_t n) {
        SolverOptions o;
        o.scheme = s;
        return max_abs(solve_dre(c, uniform_grid(0.0, 1.0, n), o).P.front() - ref);
    };
    EXPECT_GE(err(Scheme::ExplicitRK4, 10) / err(Scheme::ExplicitRK4, 20), 3.5);
    EXPECT_GE(err(Scheme::ImplicitEuler, 20) / err(Scheme::ImplicitEuler, 40), 1.8);
}

TEST(Riccati, MatchesDirectIntegrationOnRandomInstances) {
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 4;
        const DRECoefficients c = fixtures::random_dre(g, n);
        const auto grid = uniform_grid(0.0, 1.0, 200);
        const RiccatiSolution sol = solve_dre(c, grid);
        const auto ref = oracle::direct_dre(c.Q, c.Y, c.U, c.P_T, grid);
        for (std::size_t i = 0; i < grid.size(); i += 20)
            EXPECT_LE(max_abs(sol.P[i] - ref[i]), 1e-9 * std::max(1.0, max_abs(ref[i])));
    }
}

TEST(Riccati, TwoAssetInstanceIsSymmetricWithSmallResidual) {
    const mm::MMConfig cfg = fixtures::two_assets();
    const DRECoefficients c = mm::build_mm_dre(cfg, mm::aggregate_moments(cfg));
    const RiccatiSolution sol = solve_dre(c, grid_with_step(0.0, 7.0, 1e-3));
    EXPECT_LE(sol.max_symmetry_defect, 1e-10);
    EXPECT_LE(sol.max_residual, 1e-6);
    for (const Mat& P : sol.P) ASSERT_TRUE(P.allFinite());
    EXPECT_NEAR(dre_residual(c, sol.grid, sol.P), sol.max_residual, 1e-15);
}

TEST(Riccati, ImplicitEulerAgreesWithRK4) {
    std::mt19937_64 g(9);
    const DRECoefficients c = fixtures::random_dre(g, 2);
    const auto grid = uniform_grid(0.0, 1.0, 2000);
    SolverOptions o;
    o.scheme = Scheme::ImplicitEuler;
    const RiccatiSolution a = solve_dre(c, grid), b = solve_dre(c, grid, o);
    EXPECT_LE(max_abs(a.P.front() - b.P.front()), 1e-3);
    EXPECT_EQ(b.scheme, Scheme::ImplicitEuler);
}

TEST(Riccati, BlowUpReportsTime) {
    // dp/dt = -p^2 with p(2) = 1 gives p(t) = 1 / (t - 1).
    const DRECoefficients c = DRECoefficients::constant(Mat::Zero(1, 1), Mat::Zero(1, 1),
                                                        Mat::Constant(1, 1, -1.0), Mat::Constant(1, 1, 1.0));
    try {
        solve_dre(c, uniform_grid(0.0, 2.0, 4000));
        FAIL() << "expected BlowUp";
    } catch (const BlowUp& e) {
        EXPECT_NEAR(e.time(), 1.0, 1e-2);
        EXPECT_GT(e.norm(), 1e11);
    }
}

TEST(Riccati, ImplicitEulerFixedPointFailure) {
    const DRECoefficients c = DRECoefficients::constant(Mat::Constant(1, 1, 50.0), Mat::Zero(1, 1),
                                                        Mat::Constant(1, 1, 1.0), Mat::Zero(1, 1));
    SolverOptions o;
    o.scheme = Scheme::ImplicitEuler;
    EXPECT_THROW(solve_dre(c, uniform_grid(0.0, 1.0, 2), o), std::runtime_error);
}

TEST(Riccati, RejectsBadInputs) {
    const DRECoefficients c = tanh_problem();
    EXPECT_THROW(solve_dre(c, std::vector<double>{0.0}), ConfigError);
    EXPECT_THROW(solve_dre(c, std::vector<double>{0.0, 0.5, 0.5, 1.0}), ConfigError);
    DRECoefficients bad = c;
    bad.P_T = Mat::Zero(2, 2);
    EXPECT_THROW(solve_dre(bad, uniform_grid(0.0, 1.0, 10)), DimensionError);
    EXPECT_THROW(solve_dre(DRECoefficients::constant(Mat::Zero(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2),
                                                     (Mat(2, 2) << 0, 1, 0, 0).finished()),
                           uniform_grid(0.0, 1.0, 10)),
                 ConfigError);
}

TEST(Riccati, BlockAssemblyLayout) {
    BlockSpec s;
    s.d = 1;
    s.r = 1;
    s.rho = 2.0;
    s.Q11 = constant(Mat::Constant(1, 1, 0.3));
    s.Y11 = constant(Mat::Constant(1, 1, -0.1));
    s.Y21 = constant(Mat::Constant(1, 1, 0.4));
    s.U11 = constant(Mat::Constant(1, 1, 0.5));
    s.U22 = constant(Mat::Constant(1, 1, 1.5));
    s.Psi = Mat::Constant(1, 1, 0.2);
    s.Upsilon = Mat::Constant(1, 1, 0.6);
    s.Gamma = Mat::Constant(1, 1, 0.7);
    const DRECoefficients c = assemble_from_blocks(s);
    Mat Q(2, 2), Y(2, 2), U(2, 2), PT(2, 2);
    Q << 0.3, 0, 0, 0;
    Y << -0.1, 0, 0.4, 0;
    U << 1.0, 0, 0, -1.5;
    PT << -0.2, -0.3, -0.3, -0.7;
    EXPECT_LE(max_abs(c.Q(0.0) - Q), 1e-15);
    EXPECT_LE(max_abs(c.Y(0.0) - Y), 1e-15);
    EXPECT_LE(max_abs(c.U(0.0) - U), 1e-15);
    EXPECT_LE(max_abs(c.P_T - PT), 1e-15);
}
