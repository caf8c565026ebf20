#include "rmm/mm/simulate.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/core/parallel.hpp"
#include "rmm/core/random.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace rmm::mm {

Vec QuotePolicy::hedge(double, const Vec& q, const Vec&) const {
    return Vec::Zero(q.size());
}

double EnginePolicy::shift(double t, const Vec& q, const Vec& S, double z, int asset, int tier,
                           Side side) const {
    return engine_.approx_quote(t, q, S, z, asset, tier, side);
}

Vec EnginePolicy::hedge(double t, const Vec& q, const Vec& S) const {
    if (!engine_.config().eta) return Vec::Zero(q.size());
    return engine_.hedge_speed(t, q, S);
}

double GridPolicy::shift(double, const Vec& q, const Vec& S, double z, int asset, int tier,
                         Side side) const {
    if (asset != 0) throw ConfigError("lattice policy covers a single asset");
    const double s = std::clamp(S[0], grid_.S.front(), grid_.S.back());
    return grid_.quote(q[0], s, z, side, tier);
}

double FixedPolicy::shift(double, const Vec&, const Vec&, double z, int, int, Side side) const {
    for (std::size_t m = 0; m < z_.size(); ++m)
        if (std::abs(z_[m] - z) < 1e-9) return side == Side::Bid ? bid_[m] : ask_[m];
    return INFINITY;
}

OUTransition ou_transition(const MultiOUMarket& m, double dt) {
    const int d = m.d;
    Mat block = Mat::Zero(2 * d, 2 * d);
    block.topLeftCorner(d, d) = m.R;
    block.topRightCorner(d, d) = m.Sigma();
    block.bottomRightCorner(d, d) = -m.R.transpose();
    const Mat e = expm(block * dt);
    OUTransition tr;
    tr.Phi = e.bottomRightCorner(d, d).transpose();
    const Mat cov = symmetrize(tr.Phi * e.topRightCorner(d, d));
    tr.L = psd_sqrt_factor(cov);
    return tr;
}

namespace {

struct Bucket {
    const Flow* flow;
    double z;
    double weight;
    double envelope;  // sup of the intensity times the size weight
};

double intensity_sup(const IntensityModel& m) {
    return m.kind == IntensityModel::Kind::Logistic ? m.lambda_base : m.A;
}

}  // namespace

MMSimulation simulate_mm(const MMConfig& config, const QuotePolicy& policy,
                         const MMSimOptions& opts) {
    config.validate();
    if (!(opts.dt > 0)) throw ConfigError("simulation dt must be positive");
    const MultiOUMarket& mk = config.market;
    const int r = mk.r;
    const Mat J = mk.J();
    const std::vector<double> grid = grid_with_step(0.0, config.T, opts.dt);
    const double dt = grid[1] - grid[0];
    const std::size_t steps = grid.size() - 1;
    const OUTransition tr = ou_transition(mk, dt);
    const int noise = static_cast<int>(tr.L.cols());

    MMSimulation sim;
    std::vector<Bucket> buckets;
    for (const Flow& f : config.flows) {
        if (f.intensity.is_zero()) continue;
        for (std::size_t m = 0; m < f.sizes.size(); ++m) {
            const double env = intensity_sup(f.intensity) * f.sizes.w[m];
            buckets.push_back({&f, f.sizes.z[m], f.sizes.w[m], env});
            if (env * dt > 0.1) {
                std::ostringstream msg;
                msg << "fill probability per step " << env * dt << " exceeds 0.1 for asset "
                    << f.asset << ", tier " << f.tier << ", " << side_name(f.side) << ", size "
                    << f.sizes.z[m];
                sim.warnings.push_back(msg.str());
            }
        }
    }

    sim.paths.resize(opts.n_paths);
    sim.traces.resize(std::min(opts.recorded_paths, opts.n_paths));
    const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);
    std::atomic<std::size_t> clipped{0};

    parallel_for(opts.n_paths, [&](std::size_t path) {
        PathRng rng(opts.seed, path);
        Vec S = mk.S0;
        Vec q = Vec::Zero(r);
        double X = 0.0;
        PathOutcome out;
        PathTrace* trace = path < sim.traces.size() ? &sim.traces[path] : nullptr;
        Vec eps(noise);
        auto record = [&](double t) {
            trace->t.push_back(t);
            trace->S.push_back(S);
            trace->q.push_back(q);
            trace->X.push_back(X);
        };
        if (trace) record(0.0);
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = grid[k];
            for (const Bucket& b : buckets) {
                const std::uint64_t n = rng.poisson(b.envelope * dt);
                if (n == 0) continue;
                const Flow& f = *b.flow;
                const double z = b.z;
                for (std::uint64_t e = 0; e < n; ++e) {
                    const double post = q[f.asset] + (f.side == Side::Bid ? z : -z);
                    double delta = INFINITY;
                    if (std::abs(post) <= config.inventory_cap)
                        delta = policy.shift(t, q, S, z, f.asset, f.tier, f.side);
                    const double u = rng.uniform();
                    if (!std::isfinite(delta)) {
                        ++out.refused_quotes;
                        continue;
                    }
                    if (delta < 0) ++out.negative_quotes;
                    const double accept = f.intensity.value(delta) * b.weight / b.envelope;
                    if (accept > 1.0) ++clipped;
                    if (u >= accept) continue;
                    const double s = S[f.asset];
                    if (f.side == Side::Bid) {
                        q[f.asset] += z;
                        X -= z * (s - delta);
                        ++out.bid_fills;
                    } else {
                        q[f.asset] -= z;
                        X += z * (s + delta);
                        ++out.ask_fills;
                    }
                    if (trace) trace->fills.push_back({t, f.asset, f.tier, f.side, z, delta});
                }
            }
            if (config.eta) {
                const Vec v = policy.hedge(t, q, S);
                X -= dt * (v.dot(J * S) + v.dot(*config.eta * v));
                q += dt * v;
            }
            for (int i = 0; i < noise; ++i) eps[i] = rng.normal();
            S = mk.Sbar + tr.Phi * (S - mk.Sbar) + tr.L * eps;
            if (trace && ((k + 1) % stride == 0 || k + 1 == steps)) record(grid[k + 1]);
        }
        out.S_T = S;
        out.q_T = q;
        out.X_T = X;
        out.pnl = X + q.dot(J * S) - q.dot(config.Gamma * q);
        sim.paths[path] = std::move(out);
    });

    if (clipped > 0)
        sim.warnings.push_back("intensity exceeded its thinning envelope " + std::to_string(clipped.load()) +
                               " times; fills at those quotes are undercounted");

    auto mean_se = [](const std::vector<double>& v) {
        double mean = 0.0, m2 = 0.0;
        std::size_t n = 0;
        for (double x : v) {
            ++n;
            const double delta = x - mean;
            mean += delta / static_cast<double>(n);
            m2 += delta * (x - mean);
        }
        const double se = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        return std::pair{mean, se};
    };
    std::vector<double> bid, ask, util;
    for (const PathOutcome& p : sim.paths) {
        bid.push_back(static_cast<double>(p.bid_fills) / config.T);
        ask.push_back(static_cast<double>(p.ask_fills) / config.T);
        util.push_back(-std::exp(-config.rho * p.pnl));
    }
    std::tie(sim.mean_bid_fills_per_day, sim.se_bid_fills_per_day) = mean_se(bid);
    std::tie(sim.mean_ask_fills_per_day, sim.se_ask_fills_per_day) = mean_se(ask);
    std::tie(sim.mean_utility, sim.se_utility) = mean_se(util);
    return sim;
}

}  // namespace rmm::mm
