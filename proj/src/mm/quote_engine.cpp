#include "rmm/mm/quote_engine.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/mm/hamiltonian.hpp"

#include <cmath>

namespace rmm::mm {

QuoteEngine::QuoteEngine(MMConfig config, double dt, const SolverOptions& opts)
    : config_(std::move(config)) {
    if (!(dt > 0)) throw ConfigError("solver dt must be positive");
    moments_ = aggregate_moments(config_);
    model_ = quadratic_model(config_, moments_);
    const std::vector<double> grid = grid_with_step(0.0, config_.T, dt);
    riccati_ = solve_dre(build_quadratic_dre(model_), grid, opts);
    value_ = solve_def(riccati_, model_);
}

const Flow& QuoteEngine::flow(int asset, int tier, Side side) const {
    const Flow* f = config_.find(asset, tier, side);
    if (!f)
        throw ConfigError("no flow for asset " + std::to_string(asset) + ", tier " +
                          std::to_string(tier) + ", " + side_name(side));
    return *f;
}

void QuoteEngine::check_state(const Vec& q, const Vec& S) const {
    if (q.size() != model_.r || S.size() != model_.d) throw DimensionError("state has the wrong size");
    for (int i = 0; i < q.size(); ++i)
        if (std::abs(q[i]) > config_.inventory_cap)
            throw RangeError("inventory cap exceeded for asset " + std::to_string(i));
}

double QuoteEngine::liquidity_argument(const ValueSlice& v, const Vec& q, const Vec& S, double z,
                                       int asset, Side side) const {
    Vec moved = q;
    moved[asset] += side == Side::Bid ? z : -z;
    return (v.theta(q, S) - v.theta(moved, S)) / z;
}

double QuoteEngine::approx_quote(double t, const Vec& q, const Vec& S, double z, int asset,
                                 int tier, Side side) const {
    return approx_quote(value_.at(t), q, S, z, asset, tier, side);
}

double QuoteEngine::approx_quote(const ValueSlice& v, const Vec& q, const Vec& S, double z,
                                 int asset, int tier, Side side) const {
    if (flow(asset, tier, side).intensity.kind == IntensityModel::Kind::Exponential)
        return closed_form_quote(v, q, S, z, asset, tier, side);
    return generic_quote(v, q, S, z, asset, tier, side);
}

double QuoteEngine::generic_quote(const ValueSlice& v, const Vec& q, const Vec& S, double z,
                                  int asset, int tier, Side side) const {
    check_state(q, S);
    const Flow& f = flow(asset, tier, side);
    return quote_shift(f.intensity, config_.rho, z, liquidity_argument(v, q, S, z, asset, side));
}

double QuoteEngine::closed_form_quote(const ValueSlice& v, const Vec& q, const Vec& S, double z,
                                      int asset, int tier, Side side) const {
    check_state(q, S);
    const Flow& f = flow(asset, tier, side);
    if (f.intensity.kind != IntensityModel::Kind::Exponential)
        throw ConfigError("closed-form quotes need an exponential intensity");
    if (!(z > 0)) throw ConfigError("RFQ size must be positive");
    const int i = asset;
    const double g = 2.0 * v.A.row(i).dot(q) + v.B.row(i).dot(S) + v.D[i];
    const double c = config_.rho * z;
    const double premium = std::log1p(c / f.intensity.k) / c;
    if (side == Side::Bid) return -g - z * v.A(i, i) + premium;
    return g - z * v.A(i, i) + premium;
}

Vec QuoteEngine::hedge_speed(double t, const Vec& q, const Vec& S) const {
    return hedge_speed(value_.at(t), q, S);
}

Vec QuoteEngine::hedge_speed(const ValueSlice& v, const Vec& q, const Vec& S) const {
    if (!config_.eta) throw ConfigError("hedge speed needs an execution cost matrix eta");
    if (q.size() != model_.r || S.size() != model_.d) throw DimensionError("state has the wrong size");
    return 0.5 * model_.eta_inv * v.grad_q(q, S);
}

}  // namespace rmm::mm
