#include "rmm/exec/simulate.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/core/parallel.hpp"
#include "rmm/core/random.hpp"

#include <cmath>

namespace rmm::exec {

ExecSimulation simulate_execution(const Vec& true_mu, const Mat& V, const DriftPosterior& post,
                                  const ExecConfig& config, const SpeedPolicy& policy,
                                  const ExecSimOptions& opts) {
    const int d = post.dim();
    config.validate(d);
    if (!(opts.dt > 0)) throw ConfigError("simulation dt must be positive");
    if (true_mu.size() != d || V.rows() != d) throw DimensionError("true drift and V must have d rows");
    const int r = config.r;
    Mat J = Mat::Zero(r, d);
    for (int i = 0; i < r; ++i) J(i, i) = 1.0;
    const std::vector<double> grid = grid_with_step(0.0, config.T, opts.dt);
    const double dt = grid[1] - grid[0];
    const double sq = std::sqrt(dt);
    const std::size_t steps = grid.size() - 1;
    const int noise = static_cast<int>(V.cols());
    const Vec S0 = post.S0();
    const double start = config.X0 + config.q0.dot(J * S0);

    ExecSimulation sim;
    sim.paths.resize(opts.n_paths);
    sim.traces.resize(std::min(opts.recorded_paths, opts.n_paths));
    const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);

    parallel_for(opts.n_paths, [&](std::size_t path) {
        PathRng rng(opts.seed, path);
        Vec S = S0, q = config.q0, eps(noise);
        double X = config.X0;
        ExecTrace* trace = path < sim.traces.size() ? &sim.traces[path] : nullptr;
        auto record = [&](double t) {
            trace->t.push_back(t);
            trace->S.push_back(S);
            trace->b.push_back(post.mean(t, S));
            trace->q.push_back(q);
            trace->X.push_back(X);
        };
        if (trace) record(0.0);
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = grid[k];
            const Vec v = policy(t, q, S);
            X -= dt * (v.dot(J * S) + v.dot(config.eta * v));
            q += dt * v;
            for (int i = 0; i < noise; ++i) eps[i] = rng.normal();
            S += dt * true_mu + sq * (V * eps);
            if (trace && ((k + 1) % stride == 0 || k + 1 == steps)) record(grid[k + 1]);
        }
        ExecOutcome out;
        out.S_T = S;
        out.q_T = q;
        out.X_T = X;
        out.b_T = post.mean(grid.back(), S);
        out.shortfall = start - (X + q.dot(J * S) - q.dot(config.Gamma * q));
        sim.paths[path] = std::move(out);
    });

    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    for (const ExecOutcome& o : sim.paths) {
        ++n;
        const double delta = o.shortfall - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (o.shortfall - mean);
    }
    sim.mean_shortfall = mean;
    sim.se_shortfall = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return sim;
}

ExecSimulation simulate_execution(const Vec& true_mu, const Mat& V, const ExecutionEngine& engine,
                                  const ExecSimOptions& opts) {
    SpeedPolicy policy = [&engine](double t, const Vec& q, const Vec& S) {
        return engine.trading_speed(t, q, S);
    };
    return simulate_execution(true_mu, V, engine.posterior(), engine.config(), policy, opts);
}

}  // namespace rmm::exec
