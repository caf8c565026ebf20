// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any fails.

#include "fixtures.hpp"
#include "oracles.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/core/random.hpp"
#include "rmm/exec/engine.hpp"
#include "rmm/exec/posterior.hpp"
#include "rmm/leqg/simulate.hpp"
#include "rmm/leqg/value.hpp"
#include "rmm/mm/hamiltonian.hpp"
#include "rmm/mm/hjb_grid.hpp"
#include "rmm/mm/quote_engine.hpp"
#include "rmm/mm/sizes.hpp"
#include "rmm/riccati/transforms.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace rmm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_err(const Mat& a, const Mat& b) {
    return max_abs(a - b) / std::max(1.0, max_abs(b));
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

// ---------------------------------------------------------------------------

void dre_correctness(Outcome& o) {
    const mm::MMConfig cfg = fixtures::two_assets();
    const DRECoefficients c = mm::build_mm_dre(cfg, mm::aggregate_moments(cfg));
    const auto grid = grid_with_step(0.0, 7.0, 1e-3);
    const auto t0 = Clock::now();
    const RiccatiSolution sol = solve_dre(c, grid);
    const double secs = seconds_since(t0);
    bool finite = true;
    for (const Mat& P : sol.P) finite = finite && P.allFinite();
    o.detail << "steps=" << grid.size() - 1 << " symmetry=" << sol.max_symmetry_defect
             << " residual=" << sol.max_residual << " runtime=" << secs << "s";
    o.require(finite, "finite path");
    o.require(sol.max_symmetry_defect <= 1e-10, "symmetry <= 1e-10");
    o.require(sol.max_residual <= 1e-6, "residual <= 1e-6");
    o.require(secs <= 1.0, "runtime <= 1 s");
}

// Congruence P~ = Z'PZ written out directly: Q~ = Z'QZ, Y~ = Z^{-1}(YZ + Z'), U~ = Z^{-1} U Z^{-T}.
void transform_closure(Outcome& o) {
    std::mt19937_64 g(2024);
    double worst_shift = 0.0, worst_cong = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        const DRECoefficients c = fixtures::random_dre(g, n);
        const auto grid = uniform_grid(0.0, 1.0, 400);
        const RiccatiSolution sol = solve_dre(c, grid);

        const Mat K = fixtures::random_symmetric(g, n, 0.5);
        const TransformedProblem sh = transform_shift(sol, c, K);
        auto Qs = [&](double t) {
            const Mat y = c.Y(t);
            return Mat(c.Q(t) + K * c.U(t) * K + y.transpose() * K + K * y);
        };
        auto Ys = [&](double t) { return Mat(c.Y(t) + c.U(t) * K); };
        const auto ref_s = oracle::direct_dre(Qs, Ys, c.U, c.P_T - K, grid);
        for (std::size_t i = 0; i < grid.size(); i += 20)
            worst_shift = std::max(worst_shift, rel_err(sh.solution.P[i], ref_s[i]));

        const Mat M = fixtures::random_matrix(g, n, n, 0.3);
        const MatFn Z = [M, n](double t) { return Mat(Mat::Identity(n, n) + t * M); };
        const TransformedProblem cg = transform_congruence(sol, c, Z, constant(M));
        auto Qc = [&](double t) {
            const Mat z = Z(t);
            return Mat(z.transpose() * c.Q(t) * z);
        };
        auto Yc = [&](double t) {
            const Mat zi = Z(t).inverse();
            return Mat(zi * (c.Y(t) * Z(t) + M));
        };
        auto Uc = [&](double t) {
            const Mat zi = Z(t).inverse();
            return Mat(zi * c.U(t) * zi.transpose());
        };
        const Mat ZT = Z(1.0);
        const auto ref_c = oracle::direct_dre(Qc, Yc, Uc, ZT.transpose() * c.P_T * ZT, grid);
        for (std::size_t i = 0; i < grid.size(); i += 20)
            worst_cong = std::max(worst_cong, rel_err(cg.solution.P[i], ref_c[i]));
    }

    // Inventory shift on the two-asset instance, (x, y) = (S, q) with Upsilon = J'.
    mm::MMConfig cfg = fixtures::two_assets();
    cfg.Gamma = 0.01 * Mat::Identity(2, 2);
    const mm::QuadraticModel m = mm::quadratic_model(cfg, mm::aggregate_moments(cfg));
    mm::GeneralForm gf = mm::general_form(m);
    gf.spec.Upsilon = m.J().transpose();
    const DRECoefficients gc = assemble_from_blocks(gf.spec);
    Mat Kspec = Mat::Zero(4, 4);
    Kspec.topRightCorner(2, 2) = -0.5 * m.J().transpose();
    Kspec.bottomLeftCorner(2, 2) = -0.5 * m.J();
    const DRECoefficients shifted = shift_coefficients(gc, Kspec);
    const Mat swap = block_swap(2, 2);
    const Mat terminal = swap * shifted.P_T * swap.transpose();
    Mat expect = Mat::Zero(4, 4);
    expect.topLeftCorner(2, 2) = -cfg.Gamma;
    const double term_err = max_abs(terminal - expect);

    o.detail << "instances=20 shift_rel=" << worst_shift << " congruence_rel=" << worst_cong
             << " K_terminal_err=" << term_err;
    o.require(worst_shift <= 1e-8, "shift within 1e-8");
    o.require(worst_cong <= 1e-8, "congruence within 1e-8");
    o.require(term_err <= 1e-15, "K shift reproduces [[-Gamma, 0], [0, 0]]");
}

double abc_gap(const mm::QuadraticModel& m, const Mat& W) {
    const auto grid = grid_with_step(0.0, m.T, 1e-3);
    const mm::ApproxValue v = mm::split_abc(solve_dre(mm::build_quadratic_dre(m), grid), m.r, m.d);
    const auto coarse = grid_with_step(0.0, m.T, 1e-2);
    const auto ref = oracle::integrate_abc(m.Sigma, m.R, W, m.Gamma, m.rho, m.r, m.d, coarse, 10);
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const std::size_t j = i * 10;
        const double scale = std::max({1.0, max_abs(ref.A[i]), max_abs(ref.B[i]), max_abs(ref.C[i])});
        worst = std::max({worst, max_abs(v.A[j] - ref.A[i]) / scale, max_abs(v.B[j] - ref.B[i]) / scale,
                          max_abs(v.C[j] - ref.C[i]) / scale});
    }
    return worst;
}

void dre_ode_equivalence(Outcome& o) {
    const mm::MMConfig cfg = fixtures::two_assets();
    const mm::QuadraticModel m = mm::quadratic_model(cfg, mm::aggregate_moments(cfg));
    const double mm_gap = abc_gap(m, m.W());

    Mat Pi0(2, 2), Sigma(2, 2), eta(2, 2);
    Pi0 << 0.04, 0.01, 0.01, 0.09;
    Sigma << 1.0, 0.3, 0.3, 0.8;
    eta << 0.1, 0.02, 0.02, 0.15;
    const exec::DriftPosterior post({(Vec(2) << 0.05, -0.02).finished(), Pi0}, Sigma, Vec::Constant(2, 100.0));
    exec::ExecConfig ec;
    ec.r = 2;
    ec.rho = 1e-3;
    ec.eta = eta;
    ec.Gamma = 0.01 * Mat::Identity(2, 2);
    ec.T = 1.0;
    ec.q0 = Vec::Constant(2, 100.0);
    const mm::QuadraticModel em = exec::exec_model(post, ec);
    const double exec_gap = abc_gap(em, eta.inverse());
    const double r_change = max_abs(post.R(0.0) - post.R(1.0));

    o.detail << "market_making=" << mm_gap << " execution=" << exec_gap << " |R(0)-R(T)|=" << r_change;
    o.require(mm_gap <= 1e-8, "market making within 1e-8");
    o.require(exec_gap <= 1e-8, "execution within 1e-8");
    o.require(r_change > 1e-3, "execution drift is time dependent");
}

void hamiltonian_oracles(Outcome& o) {
    const mm::IntensityModel ex = mm::IntensityModel::exponential(20.0, 15.0);
    const mm::IntensityModel lg = fixtures::logistic_flow();
    double closed = 0.0, shift = 0.0, envelope = 0.0, slope = 0.0;
    for (double rho : {1e-3, 5e-3})
        for (double z : {25.0, 100.0, 250.0})
            for (double p : {-0.05, 0.0, 0.05}) {
                const double c = rho * z;
                const double x = mm::argmax_golden(ex, rho, z, p);
                const double Hg = ex.value(x) * (1.0 - std::exp(-c * (x - p))) / c;
                const double Hc = mm::hamiltonian_exp_closed_form(20.0, 15.0, rho, z, p);
                closed = std::max(closed, std::abs(Hg - Hc) / std::max(1.0, std::abs(Hc)));
                for (const mm::IntensityModel* m : {&ex, &lg}) {
                    const double d_direct = oracle::direct_argmax(*m, rho, z, p);
                    shift = std::max(shift, std::abs(mm::quote_shift(*m, rho, z, p) - d_direct));
                    const mm::HamiltonianValue hv = mm::hamiltonian(*m, rho, z, p);
                    const double lam = m->value(hv.delta_star);
                    envelope = std::max(envelope, std::abs(c * hv.H - hv.dH - lam) / std::max(1.0, lam));
                    const double h = 1e-6;
                    const double fd = (mm::hamiltonian(*m, rho, z, p + h).H - mm::hamiltonian(*m, rho, z, p - h).H) / (2 * h);
                    slope = std::max(slope, std::abs(fd - hv.dH) / std::max(1.0, std::abs(hv.dH)));
                }
            }
    o.detail << "closed_form_rel=" << closed << " shift_abs=" << shift << " envelope_rel=" << envelope << " dH_vs_fd_rel=" << slope;
    o.require(closed <= 1e-8, "closed form within 1e-8");
    o.require(shift <= 1e-6, "quote shift within 1e-6");
    o.require(envelope <= 1e-8, "envelope identity within 1e-8");
    o.require(slope <= 1e-6, "H' agrees with a finite difference of H");
}

void size_discretization(Outcome& o) {
    const double reference[] = {6.2, 18.1, 22.5, 19.7, 14.1, 8.9, 5.2, 2.9, 1.6, 0.8};
    const mm::SizeDistribution s = mm::discretize_gamma(4.0, 0.04, 25.0, 10);
    double worst = 0.0;
    o.detail << "weights%=";
    for (std::size_t k = 0; k < 10; ++k) {
        worst = std::max(worst, std::abs(100.0 * s.w[k] - reference[k]));
        o.detail << (k ? "," : "") << std::round(1000.0 * s.w[k]) / 10.0;
    }
    o.detail << " max_gap_pp=" << worst;
    o.require(s.size() == 10, "10 bins");
    o.require(worst <= 0.5, "within 0.5 pp");
}

struct GridRuns {
    mm::HJBGridSolution flat, tilted;
    double flat_secs = 0.0;
};

const GridRuns& grid_runs() {
    static const GridRuns runs = [] {
        GridRuns g;
        mm::HJBGridSpec spec;
        spec.dt = 1e-3;
        spec.dq = 25.0;
        spec.dS = 0.05;
        spec.S_span_sd = 6.0;
        const auto t0 = Clock::now();
        g.flat = mm::hjb_grid_solve_1d(fixtures::single_asset(0.0), spec);
        g.flat_secs = seconds_since(t0);
        g.tilted = mm::hjb_grid_solve_1d(fixtures::single_asset(0.1), spec);
        return g;
    }();
    return runs;
}

void quote_shape_properties(Outcome& o) {
    const GridRuns& g = grid_runs();
    const mm::HJBGridSolution& f = g.flat;
    double scale = 0.0;
    for (double v : f.theta) scale = std::max(scale, std::abs(v));
    double s_spread = 0.0;
    for (std::size_t iq = 0; iq < f.q.size(); ++iq)
        for (std::size_t iS = 1; iS < f.S.size(); ++iS)
            s_spread = std::max(s_spread, std::abs(f.at(iq, iS) - f.at(iq, 0)));

    const double Sbar = 100.0;
    double quote_spread = 0.0;
    bool monotone_q = true, monotone_z = true;
    for (double z : {25.0, 100.0, 250.0})
        for (mm::Side side : {mm::Side::Bid, mm::Side::Ask}) {
            double prev = NAN;
            for (double q = -600.0; q <= 600.0; q += 25.0) {
                const double d = f.quote(q, Sbar, z, side);
                for (double S : {Sbar - 2.0, Sbar + 2.0}) {
                    const double e = f.quote(q, S, z, side);
                    if (std::isfinite(d)) quote_spread = std::max(quote_spread, std::abs(e - d));
                }
                if (std::isfinite(d) && std::isfinite(prev)) {
                    const double step = side == mm::Side::Bid ? d - prev : prev - d;
                    monotone_q = monotone_q && step >= -1e-12;
                }
                prev = d;
            }
        }
    for (mm::Side side : {mm::Side::Bid, mm::Side::Ask}) {
        double prev = -INFINITY;
        for (double z = 25.0; z <= 250.0; z += 25.0) {
            const double d = f.quote(0.0, Sbar, z, side);
            monotone_z = monotone_z && d >= prev - 1e-12;
            prev = d;
        }
    }
    const mm::HJBGridSolution& t = g.tilted;
    auto tq = [&](double S, mm::Side s) { return t.quote(0.0, S, 100.0, s); };
    const bool tilt = tq(Sbar + 2, mm::Side::Bid) > tq(Sbar, mm::Side::Bid) &&
                      tq(Sbar + 2, mm::Side::Ask) < tq(Sbar, mm::Side::Ask) &&
                      tq(Sbar - 2, mm::Side::Bid) < tq(Sbar, mm::Side::Bid) &&
                      tq(Sbar - 2, mm::Side::Ask) > tq(Sbar, mm::Side::Ask);

    o.detail << "lattice=" << f.q.size() << "x" << f.S.size() << " theta_S_spread/scale=" << s_spread / scale
             << " quote_S_spread=" << quote_spread << " monotone_q=" << monotone_q << " monotone_z=" << monotone_z
             << " tilt=" << tilt << " grid_runtime=" << g.flat_secs << "s";
    o.require(s_spread <= 1e-6 * scale, "theta constant in S");
    o.require(quote_spread <= 1e-6 * std::max(1.0, scale), "quotes constant in S");
    o.require(monotone_q, "bid non-decreasing, ask non-increasing in q");
    o.require(monotone_z, "shifts non-decreasing in size at q = 0");
    o.require(tilt, "speculative tilt at Sbar +- 2");
    o.require(g.flat_secs <= 60.0, "grid solve <= 60 s");
}

void grid_vs_riccati(Outcome& o) {
    const mm::HJBGridSolution& f = grid_runs().flat;
    const mm::QuoteEngine e(fixtures::single_asset(0.0), 1e-3);
    const mm::ValueSlice v0 = e.value().at(0.0);
    double worst_ratio = 0.0, worst_dev = 0.0;
    for (mm::Side side : {mm::Side::Bid, mm::Side::Ask}) {
        double lo = INFINITY, hi = -INFINITY, dev = 0.0;
        for (double q = -300.0; q <= 300.0; q += 25.0) {
            const double dg = f.quote(q, 100.0, 100.0, side);
            const double da = e.approx_quote(v0, Vec::Constant(1, q), Vec::Constant(1, 100.0), 100.0, 0, 0, side);
            lo = std::min(lo, dg);
            hi = std::max(hi, dg);
            dev = std::max(dev, std::abs(dg - da));
        }
        worst_dev = std::max(worst_dev, dev);
        worst_ratio = std::max(worst_ratio, dev / (hi - lo));
    }
    o.detail << "max_deviation=" << worst_dev << " deviation/range=" << worst_ratio;
    o.require(worst_ratio <= 0.10, "within 10% of the grid quote range");
}

void verification_mc(Outcome& o) {
    const auto t0 = Clock::now();
    int idx = 0;
    for (const leqg::Problem& p : {fixtures::leqg_scalar(), fixtures::leqg_two_state()}) {
        const auto grid = grid_with_step(0.0, p.T, 1e-3);
        const leqg::ValueCoefficients v = leqg::solve_value(p, grid);
        const leqg::LinearPolicy best = leqg::optimal_policy(p, v, grid);
        const Vec one = Vec::Constant(p.r, 1.0);
        const std::vector<leqg::LinearPolicy> pols{best,
                                                    leqg::perturb(best, 0.7, Vec::Zero(p.r)),
                                                    leqg::perturb(best, 1.3, Vec::Zero(p.r)),
                                                    leqg::perturb(best, 1.0, 0.3 * one),
                                                    leqg::perturb(best, 1.0, -0.3 * one),
                                                    leqg::perturb(best, 0.0, Vec::Zero(p.r))};
        leqg::SimulationOptions opts;
        opts.dt = 1e-3;
        opts.n_paths = 200000;
        opts.seed = 31 + idx;
        const auto ens = leqg::simulate_linear(p, pols, opts);
        const leqg::MCEstimate opt = leqg::mc_performance(ens[0], p);
        const double w = v.value(0.0, p.x0, p.y0, p.z0, p.rho);
        const double z = std::abs(opt.mean - w) / opt.std_error;
        o.detail << (idx ? " " : "") << "d=" << p.d << ",r=" << p.r << ": value=" << w << " mc=" << opt.mean
                 << " se=" << opt.std_error << " |gap|/se=" << z;
        o.require(z <= 3.0, "instance " + std::to_string(idx) + " within 3 SE");
        double weakest = INFINITY;
        for (std::size_t k = 1; k < pols.size(); ++k) {
            const leqg::MCEstimate diff = leqg::mc_difference(ens[0], ens[k], p);
            weakest = std::min(weakest, diff.mean / diff.std_error);
        }
        o.detail << " min_advantage/se=" << weakest;
        o.require(weakest > 3.0, "instance " + std::to_string(idx) + " beats perturbations by 3 SE");
        ++idx;
    }
    const double secs = seconds_since(t0);
    o.detail << " runtime=" << secs << "s";
    o.require(secs <= 120.0, "runtime <= 2 min");
}

void bayesian_filter(Outcome& o) {
    Mat Pi0(2, 2), Sigma(2, 2);
    Pi0 << 0.04, 0.01, 0.01, 0.09;
    Sigma << 1.0, 0.3, 0.3, 0.8;
    const exec::DriftPosterior post({(Vec(2) << 0.05, -0.02).finished(), Pi0}, Sigma, Vec::Constant(2, 100.0));
    const Mat L = Sigma.llt().matrixL();
    const Vec mu = (Vec(2) << 0.3, -0.1).finished();
    const double dt = 1e-4;
    const int steps = 10000;
    double filter = 0.0;
    for (std::uint64_t path = 0; path < 100; ++path) {
        PathRng rng(11, path);
        std::vector<Vec> inc;
        inc.reserve(steps);
        Vec S = post.S0();
        for (int k = 0; k < steps; ++k) {
            Vec eps(2);
            eps << rng.normal(), rng.normal();
            inc.push_back(dt * mu + std::sqrt(dt) * (L * eps));
            S += inc.back();
        }
        const Vec ref = oracle::kalman_drift(post.prior().b0, post.prior().Pi0, Sigma, inc, dt).back();
        filter = std::max(filter, (post.mean(steps * dt, S) - ref).norm() / std::max(1.0, ref.norm()));
    }
    const Mat Sinv = Sigma.inverse();
    double riccati = 0.0, comm = 0.0, drift = 0.0;
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
        const double h = 1e-4;
        const Mat dPi = (post.Pi(t + h) - post.Pi(t - h)) / (2 * h);
        riccati = std::max(riccati, max_abs(dPi + post.Pi(t) * Sinv * post.Pi(t)));
        for (double u : {0.0, 0.7, 2.0}) comm = std::max(comm, max_abs(post.R(t) * post.R(u) - post.R(u) * post.R(t)));
    }
    std::mt19937_64 g(5);
    for (int k = 0; k < 50; ++k) {
        const double t = 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(g);
        const Vec S = Vec::Constant(2, 100.0) + fixtures::random_matrix(g, 2, 1, 5.0);
        drift = std::max(drift, (post.R(t) * (post.Sbar() - S) - post.mean(t, S)).cwiseAbs().maxCoeff());
    }
    o.detail << "filter_rel=" << filter << " dPi_residual=" << riccati << " commutator=" << comm
             << " drift_identity=" << drift;
    o.require(filter <= 1e-3, "filter within 1e-3 relative");
    o.require(riccati <= 1e-6, "covariance ODE within 1e-6");
    o.require(comm <= 1e-10, "commutator <= 1e-10");
    o.require(drift <= 1e-10, "drift identity within 1e-10");
}

void blow_up(Outcome& o) {
    leqg::Problem p = fixtures::leqg_two_state();
    p.rho *= 1e6;
    const DRECoefficients c = assemble_from_blocks(leqg::to_block_spec(p));
    try {
        solve_dre(c, grid_with_step(0.0, p.T, 1e-3));
        o.detail << "no blow-up";
        o.require(false, "BlowUp raised");
    } catch (const BlowUp& e) {
        o.detail << "rho=" << p.rho << " failure_time=" << e.time() << " norm=" << e.norm();
        o.require(e.time() >= 0.0 && e.time() < p.T, "failure time inside the horizon");
    }
}

void cointegration_tilt(Outcome& o) {
    const mm::QuoteEngine e(fixtures::two_assets(), 1e-3);
    const Vec q = Vec::Zero(2), base = Vec::Constant(2, 100.0);
    const Vec wide = (Vec(2) << 101.0, 99.0).finished();
    auto quote = [&](const Vec& S, int asset, mm::Side s) { return e.approx_quote(0.0, q, S, 100.0, asset, 0, s); };
    const double b0 = quote(wide, 0, mm::Side::Bid) - quote(base, 0, mm::Side::Bid);
    const double a1 = quote(wide, 1, mm::Side::Ask) - quote(base, 1, mm::Side::Ask);
    const double a0 = quote(wide, 0, mm::Side::Ask) - quote(base, 0, mm::Side::Ask);
    const double b1 = quote(wide, 1, mm::Side::Bid) - quote(base, 1, mm::Side::Bid);
    o.detail << "S1-S2=2: asset1 bid " << b0 << ", asset2 ask " << a1 << ", asset1 ask " << a0 << ", asset2 bid " << b1;
    o.require(b0 > 0 && a1 > 0, "asset-1 bid and asset-2 ask premia");
    o.require(a0 < 0 && b1 < 0, "opposite sides discounted");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"dre_correctness", dre_correctness},
        {"transform_closure", transform_closure},
        {"dre_ode_equivalence", dre_ode_equivalence},
        {"hamiltonian_oracles", hamiltonian_oracles},
        {"size_discretization", size_discretization},
        {"quote_shape_properties", quote_shape_properties},
        {"grid_vs_riccati", grid_vs_riccati},
        {"verification_monte_carlo", verification_mc},
        {"bayesian_filter", bayesian_filter},
        {"blow_up_detection", blow_up},
        {"cointegration_tilt", cointegration_tilt},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
