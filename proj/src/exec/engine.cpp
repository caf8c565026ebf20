#include "rmm/exec/engine.hpp"

#include "rmm/core/errors.hpp"

namespace rmm::exec {

void ExecConfig::validate(int d) const {
    if (r <= 0 || r > d) throw DimensionError("execution needs 0 < r <= d");
    if (!(rho > 0)) throw ConfigError("rho must be positive");
    if (!(T > 0)) throw ConfigError("horizon T must be positive");
    if (eta.rows() != r || eta.cols() != r) throw DimensionError("eta must be r x r");
    if (!is_pd(eta)) throw SingularMatrix("eta must be positive definite");
    if (Gamma.rows() != r || Gamma.cols() != r) throw DimensionError("Gamma must be r x r");
    if (!is_psd(Gamma)) throw NotPSD("Gamma must be positive semidefinite");
    if (q0.size() != r) throw DimensionError("initial inventory must have r entries");
}

mm::QuadraticModel exec_model(const DriftPosterior& post, const ExecConfig& config) {
    const int d = post.dim();
    config.validate(d);
    mm::QuadraticModel m;
    m.r = config.r;
    m.d = d;
    m.rho = config.rho;
    m.T = config.T;
    m.Sigma = post.Sigma();
    const EffectiveDynamics dyn = effective_dynamics(post);
    m.R = dyn.R;
    m.Sbar = dyn.Sbar;
    m.eta_inv = symmetrize(checked_inverse(config.eta, "eta"));
    m.Gamma = config.Gamma;
    m.moments = mm::Moments::zero(config.r);
    return m;
}

DRECoefficients build_exec_dre(const DriftPosterior& post, const ExecConfig& config) {
    return mm::build_quadratic_dre(exec_model(post, config));
}

ExecutionEngine::ExecutionEngine(DriftPosterior post, ExecConfig config, double dt,
                                 const SolverOptions& opts)
    : post_(std::move(post)), config_(std::move(config)) {
    if (!(dt > 0)) throw ConfigError("solver dt must be positive");
    model_ = exec_model(post_, config_);
    const std::vector<double> grid = grid_with_step(0.0, config_.T, dt);
    riccati_ = solve_dre(mm::build_quadratic_dre(model_), grid, opts);
    value_ = mm::solve_def(riccati_, model_);
}

Vec ExecutionEngine::trading_speed(double t, const Vec& q, const Vec& S) const {
    if (q.size() != config_.r || S.size() != post_.dim()) throw DimensionError("state has the wrong size");
    return 0.5 * model_.eta_inv * value_.at(t).grad_q(q, S);
}

Vec trading_speed(const ExecutionEngine& engine, double t, const Vec& q, const Vec& S) {
    return engine.trading_speed(t, q, S);
}

}  // namespace rmm::exec
