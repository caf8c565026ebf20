#include "rmm/cli/commands.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/exec/simulate.hpp"
#include "rmm/io/csv.hpp"
#include "rmm/leqg/simulate.hpp"
#include "rmm/leqg/value.hpp"
#include "rmm/mm/quote_engine.hpp"
#include "rmm/mm/simulate.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace rmm::cli {

namespace fs = std::filesystem;

int guarded(const std::function<void()>& f, std::ostream& err) {
    try {
        f();
        return kOk;
    } catch (const GridDivergence& e) {
        err << "grid divergence: " << e.what() << '\n';
        return kGridDivergence;
    } catch (const BlowUp& e) {
        err << "blow-up: " << e.what() << '\n';
        return kBlowUp;
    } catch (const NoConvergence& e) {
        err << "blow-up: " << e.what() << '\n';
        return kBlowUp;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NotPSD& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SingularMatrix& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const RangeError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

namespace {

struct Context {
    io::Scenario sc;
    fs::path dir;
    std::uint64_t seed;
};

Context load(const Options& o) {
    Context c{io::load_scenario(o.config), {}, 0};
    if (o.seed) c.sc.simulation.seed = *o.seed;
    c.seed = c.sc.simulation.seed;
    c.dir = o.out ? fs::path(*o.out) : fs::path(c.sc.output_dir);
    fs::create_directories(c.dir);
    return c;
}

std::ofstream open(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    return out;
}

std::vector<std::string> indexed(const std::string& stem, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(stem + "_" + std::to_string(i));
    return out;
}

template <class... Lists>
std::vector<std::string> concat(std::vector<std::string> head, const Lists&... tail) {
    (head.insert(head.end(), tail.begin(), tail.end()), ...);
    return head;
}

DRECoefficients scenario_dre(const io::Scenario& sc, double& T) {
    switch (sc.problem) {
        case io::ProblemKind::MarketMaking: {
            const mm::MMConfig& c = sc.market_making();
            T = c.T;
            return mm::build_mm_dre(c, mm::aggregate_moments(c));
        }
        case io::ProblemKind::Execution: {
            const exec::ExecConfig c = sc.exec_config();
            T = c.T;
            return exec::build_exec_dre(sc.posterior(), c);
        }
        case io::ProblemKind::Leqg: {
            const leqg::Problem& p = sc.leqg_problem();
            T = p.T;
            return assemble_from_blocks(leqg::to_block_spec(p));
        }
    }
    throw ConfigError("unknown problem kind");
}

}  // namespace

void cmd_solve_dre(const Options& o, std::ostream& log) {
    Context c = load(o);
    double T = 0.0;
    const DRECoefficients coeffs = scenario_dre(c.sc, T);
    const std::vector<double> grid = grid_with_step(0.0, T, c.sc.solver.dt);
    const RiccatiSolution sol = solve_dre(coeffs, grid, c.sc.solver.options());
    const int n = coeffs.n;
    std::vector<std::string> cols{"t"};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cols.push_back("P_" + std::to_string(i) + "_" + std::to_string(j));
    std::ofstream out = open(c.dir / "dre.csv");
    io::CsvWriter w(out, c.sc.hash, c.seed, cols);
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
        w << sol.grid[k];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w << sol.P[k](i, j);
        w.end_row();
    }
    log << "max_residual " << io::format_number(sol.max_residual) << '\n';
    log << "max_symmetry_defect " << io::format_number(sol.max_symmetry_defect) << '\n';
    log << "wrote " << (c.dir / "dre.csv").string() << '\n';
}

void cmd_quotes(const Options& o, std::ostream& log) {
    Context c = load(o);
    const mm::MMConfig& cfg = c.sc.market_making();
    const io::SweepSection& sw = c.sc.sweep;
    const int r = cfg.market.r, d = cfg.market.d;
    if (sw.asset < 0 || sw.asset >= r) throw ConfigError("key 'sweep.asset' is out of range");
    const bool empty = sw.q.empty() || sw.S.empty() || sw.z.empty() || sw.t.empty();
    std::optional<mm::QuoteEngine> engine;
    if (!empty) engine.emplace(cfg, c.sc.solver.dt, c.sc.solver.options());
    std::ofstream out = open(c.dir / "quotes.csv");
    io::CsvWriter w(out, c.sc.hash, c.seed,
                    concat(std::vector<std::string>{"t"}, indexed("q", r), indexed("S", d),
                           std::vector<std::string>{"z", "asset", "tier", "side", "shift", "flag"}));
    std::size_t skipped = 0;
    if (!empty) {
        for (double t : sw.t)
            for (double qv : sw.q)
                for (double sv : sw.S)
                    for (double z : sw.z)
                        for (mm::Side side : {mm::Side::Bid, mm::Side::Ask}) {
                            Vec q = Vec::Zero(r);
                            q[sw.asset] = qv;
                            Vec S = cfg.market.Sbar;
                            S[sw.asset] = sv;
                            std::string flag = "ok";
                            double shift = INFINITY;
                            const double post = qv + (side == mm::Side::Bid ? z : -z);
                            if (std::abs(qv) > cfg.inventory_cap) {
                                flag = "cap";
                                ++skipped;
                            } else {
                                shift = engine->approx_quote(t, q, S, z, sw.asset, sw.tier, side);
                                if (std::abs(post) > cfg.inventory_cap) flag = "refused";
                            }
                            w << t;
                            for (int i = 0; i < r; ++i) w << q[i];
                            for (int i = 0; i < d; ++i) w << S[i];
                            w << z << std::to_string(sw.asset) << std::to_string(sw.tier)
                              << mm::side_name(side) << shift << flag;
                            w.end_row();
                        }
    }
    log << "rows " << w.rows() << " (cap exceeded: " << skipped << ")\n";
    log << "wrote " << (c.dir / "quotes.csv").string() << '\n';
}

Comparison compare_quotes(const std::vector<double>& q, const std::vector<double>& S,
                          const std::vector<double>& z, const QuoteFn& grid, const QuoteFn& approx) {
    Comparison cmp;
    for (double sv : S)
        for (double zv : z)
            for (mm::Side side : {mm::Side::Bid, mm::Side::Ask}) {
                const std::size_t first = cmp.rows.size();
                double lo = INFINITY, hi = -INFINITY;
                double prev_g = NAN, prev_a = NAN;
                for (double qv : q) {
                    ComparisonRow row{qv, sv, zv, side, grid(qv, sv, zv, side), approx(qv, sv, zv, side), false};
                    if (std::isfinite(row.delta_grid)) {
                        lo = std::min(lo, row.delta_grid);
                        hi = std::max(hi, row.delta_grid);
                    }
                    const double sign = side == mm::Side::Bid ? 1.0 : -1.0;
                    if (std::isfinite(row.delta_grid) && std::isfinite(prev_g) &&
                        sign * (row.delta_grid - prev_g) < -1e-12)
                        cmp.grid_monotone = false;
                    if (std::isfinite(row.delta_approx) && std::isfinite(prev_a) &&
                        sign * (row.delta_approx - prev_a) < -1e-12)
                        cmp.approx_monotone = false;
                    prev_g = row.delta_grid;
                    prev_a = row.delta_approx;
                    cmp.rows.push_back(row);
                }
                const double range = hi > lo ? hi - lo : 0.0;
                for (std::size_t k = first; k < cmp.rows.size(); ++k) {
                    ComparisonRow& row = cmp.rows[k];
                    if (!std::isfinite(row.delta_grid) || !std::isfinite(row.delta_approx)) continue;
                    const double dev = std::abs(row.delta_grid - row.delta_approx);
                    cmp.max_abs_deviation = std::max(cmp.max_abs_deviation, dev);
                    row.high_deviation = dev > 0.1 * range;
                }
            }
    return cmp;
}

void cmd_compare_approx(const Options& o, std::ostream& log) {
    Context c = load(o);
    const mm::MMConfig& cfg = c.sc.market_making();
    if (cfg.market.r != 1 || cfg.market.d != 1) throw ConfigError("compare-approx needs a single-asset config");
    const mm::HJBGridSolution grid = mm::hjb_grid_solve_1d(cfg, c.sc.grid);
    const mm::QuoteEngine engine(cfg, c.sc.solver.dt, c.sc.solver.options());
    const double Sbar = cfg.market.Sbar[0];
    const io::SweepSection& sw = c.sc.sweep;
    const std::vector<double> q = sw.q.empty() ? grid.q : sw.q;
    const std::vector<double> S = sw.S.empty() ? std::vector<double>{Sbar - 2.0, Sbar, Sbar + 2.0} : sw.S;
    const std::vector<double> z = sw.z.empty() ? std::vector<double>{100.0} : sw.z;
    const int tier = sw.tier;
    const mm::ValueSlice v0 = engine.value().at(0.0);
    auto on_grid = [&](double qv, double sv, double zv, mm::Side side) {
        return grid.quote(qv, sv, zv, side, tier);
    };
    auto approx = [&](double qv, double sv, double zv, mm::Side side) {
        const double post = qv + (side == mm::Side::Bid ? zv : -zv);
        if (std::abs(post) > cfg.inventory_cap) return static_cast<double>(INFINITY);
        return engine.approx_quote(v0, Vec::Constant(1, qv), Vec::Constant(1, sv), zv, 0, tier, side);
    };
    const Comparison cmp = compare_quotes(q, S, z, on_grid, approx);
    std::ofstream out = open(c.dir / "compare.csv");
    io::CsvWriter w(out, c.sc.hash, c.seed,
                    {"q", "S", "z", "side", "delta_grid", "delta_riccati", "deviation", "high_deviation"});
    for (const ComparisonRow& row : cmp.rows) {
        w << row.q << row.S << row.z << mm::side_name(row.side) << row.delta_grid << row.delta_approx
          << row.delta_grid - row.delta_approx << (row.high_deviation ? "1" : "0");
        w.end_row();
    }
    log << "max_abs_deviation " << io::format_number(cmp.max_abs_deviation) << '\n';
    log << "monotone_grid " << (cmp.grid_monotone ? "true" : "false") << '\n';
    log << "monotone_riccati " << (cmp.approx_monotone ? "true" : "false") << '\n';
    log << "hamiltonian_fallbacks " << grid.fallback_evaluations << '\n';
    log << "wrote " << (c.dir / "compare.csv").string() << '\n';
}

namespace {

void simulate_mm_cmd(Context& c, std::ostream& log) {
    const mm::MMConfig& cfg = c.sc.market_making();
    const io::SimulationSection& s = c.sc.simulation;
    const int r = cfg.market.r, d = cfg.market.d;
    const mm::QuoteEngine engine(cfg, c.sc.solver.dt, c.sc.solver.options());
    const mm::EnginePolicy policy(engine);
    const mm::MMSimulation sim =
        mm::simulate_mm(cfg, policy, {s.dt, s.n_paths, s.seed, s.recorded_paths, s.record_stride});
    std::vector<std::string> cols = concat(std::vector<std::string>{"path", "t"}, indexed("S", d));
    if (d >= 2) cols.push_back("S_0_minus_S_1");
    cols = concat(cols, indexed("q", r), std::vector<std::string>{"X", "bid_fills", "ask_fills"});
    std::ofstream out = open(c.dir / "paths_mm.csv");
    io::CsvWriter w(out, c.sc.hash, c.seed, cols);
    for (std::size_t p = 0; p < sim.traces.size(); ++p) {
        const mm::PathTrace& tr = sim.traces[p];
        std::size_t next_fill = 0;
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
            std::size_t bid = 0, ask = 0;
            while (next_fill < tr.fills.size() && tr.fills[next_fill].t < tr.t[k]) {
                (tr.fills[next_fill].side == mm::Side::Bid ? bid : ask) += 1;
                ++next_fill;
            }
            w << std::to_string(p) << tr.t[k];
            for (int i = 0; i < d; ++i) w << tr.S[k][i];
            if (d >= 2) w << tr.S[k][0] - tr.S[k][1];
            for (int i = 0; i < r; ++i) w << tr.q[k][i];
            w << tr.X[k] << static_cast<double>(bid) << static_cast<double>(ask);
            w.end_row();
        }
    }
    for (const std::string& warn : sim.warnings) log << "warning: " << warn << '\n';
    log << "paths " << sim.paths.size() << '\n';
    if (!sim.paths.empty()) {
        log << "bid_fills_per_day " << io::format_number(sim.mean_bid_fills_per_day) << " +- "
            << io::format_number(sim.se_bid_fills_per_day) << '\n';
        log << "ask_fills_per_day " << io::format_number(sim.mean_ask_fills_per_day) << " +- "
            << io::format_number(sim.se_ask_fills_per_day) << '\n';
        log << "terminal_utility " << io::format_number(sim.mean_utility) << " +- "
            << io::format_number(sim.se_utility) << '\n';
    }
    log << "wrote " << (c.dir / "paths_mm.csv").string() << '\n';
}

void simulate_exec_cmd(Context& c, std::ostream& log) {
    const io::SimulationSection& s = c.sc.simulation;
    const exec::ExecutionEngine engine(c.sc.posterior(), c.sc.exec_config(), c.sc.solver.dt,
                                       c.sc.solver.options());
    const io::ExecutionSection& e = *c.sc.execution;
    const exec::ExecSimulation sim = exec::simulate_execution(
        e.true_mu, e.V, engine, {s.dt, s.n_paths, s.seed, s.recorded_paths, s.record_stride});
    const int d = static_cast<int>(e.S0.size()), r = static_cast<int>(e.q0.size());
    std::ofstream out = open(c.dir / "paths_exec.csv");
    io::CsvWriter w(out, c.sc.hash, c.seed,
                    concat(std::vector<std::string>{"path", "t"}, indexed("S", d), indexed("b", d),
                           indexed("q", r), std::vector<std::string>{"X"}));
    for (std::size_t p = 0; p < sim.traces.size(); ++p) {
        const exec::ExecTrace& tr = sim.traces[p];
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
            w << std::to_string(p) << tr.t[k];
            for (int i = 0; i < d; ++i) w << tr.S[k][i];
            for (int i = 0; i < d; ++i) w << tr.b[k][i];
            for (int i = 0; i < r; ++i) w << tr.q[k][i];
            w << tr.X[k];
            w.end_row();
        }
    }
    log << "paths " << sim.paths.size() << '\n';
    if (!sim.paths.empty())
        log << "shortfall " << io::format_number(sim.mean_shortfall) << " +- "
            << io::format_number(sim.se_shortfall) << '\n';
    log << "wrote " << (c.dir / "paths_exec.csv").string() << '\n';
}

void simulate_leqg_cmd(Context& c, std::ostream& log) {
    const leqg::Problem& p = c.sc.leqg_problem();
    const io::SimulationSection& s = c.sc.simulation;
    const std::vector<double> vgrid = grid_with_step(0.0, p.T, c.sc.solver.dt);
    const leqg::ValueCoefficients v = leqg::solve_value(p, vgrid);
    const std::vector<double> sgrid = grid_with_step(0.0, p.T, s.dt);
    const leqg::LinearPolicy policy = leqg::optimal_policy(p, v, sgrid);
    leqg::SimulationOptions opts;
    opts.dt = s.dt;
    opts.n_paths = s.n_paths;
    opts.seed = s.seed;
    opts.recorded_paths = s.recorded_paths;
    std::vector<leqg::Ensemble> ens;
    if (s.n_paths > 0) ens = leqg::simulate_linear(p, {&policy, 1}, opts);
    std::ofstream out = open(c.dir / "paths_leqg.csv");
    io::CsvWriter w(out, c.sc.hash, c.seed,
                    concat(std::vector<std::string>{"path", "t"}, indexed("x", p.d), indexed("y", p.r),
                           std::vector<std::string>{"z"}));
    if (!ens.empty()) {
        const leqg::Ensemble& e = ens.front();
        const std::size_t stride = std::max<std::size_t>(1, s.record_stride);
        for (std::size_t k = 0; k < e.paths.size(); ++k) {
            const leqg::PathRecord& rec = e.paths[k];
            for (std::size_t i = 0; i < rec.x.size(); ++i) {
                if (i % stride != 0 && i + 1 != rec.x.size()) continue;
                w << std::to_string(k) << e.grid[i];
                for (int a = 0; a < p.d; ++a) w << rec.x[i][a];
                for (int a = 0; a < p.r; ++a) w << rec.y[i][a];
                w << rec.z[i];
                w.end_row();
            }
        }
    }
    log << "paths " << s.n_paths << '\n';
    log << "analytic_value " << io::format_number(v.value(0.0, p.x0, p.y0, p.z0, p.rho)) << '\n';
    if (s.n_paths >= 2) {
        const leqg::MCEstimate est = leqg::mc_performance(ens.front(), p);
        log << "terminal_utility " << io::format_number(est.mean) << " +- "
            << io::format_number(est.std_error) << '\n';
    }
    log << "wrote " << (c.dir / "paths_leqg.csv").string() << '\n';
}

}  // namespace

void cmd_simulate(const Options& o, const std::string& which, std::ostream& log) {
    Context c = load(o);
    if (which == "mm") simulate_mm_cmd(c, log);
    else if (which == "exec") simulate_exec_cmd(c, log);
    else if (which == "leqg") simulate_leqg_cmd(c, log);
    else throw ConfigError("simulate target must be mm, exec or leqg");
}

}  // namespace rmm::cli
