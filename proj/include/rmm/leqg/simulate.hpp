#pragma once

#include "rmm/leqg/value.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rmm::leqg {

/// Time-varying linear feedback u = Kx(t_k) x + Ky(t_k) y + c(t_k) on the simulation grid.
struct LinearPolicy {
    std::vector<Gains> steps;
};

LinearPolicy optimal_policy(const Problem& p, const ValueCoefficients& v,
                            std::span<const double> grid);

/// Scales both gains and adds a constant offset.
LinearPolicy perturb(const LinearPolicy& base, double gain_scale, const Vec& offset);

using FeedbackPolicy = std::function<Vec(double t, const Vec& x, const Vec& y)>;

struct SimulationOptions {
    double dt = 1e-3;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    std::size_t block = 2048;
    std::size_t recorded_paths = 0;
};

struct PathRecord {
    std::vector<Vec> x, y, u;
    std::vector<double> z;
};

struct Ensemble {
    int d = 0, r = 0;
    std::vector<double> grid;
    std::vector<Vec> xT, yT;
    std::vector<double> zT;
    std::vector<PathRecord> paths;
    /// max over paths and times of |u_s| / (1 + sup_{tau <= s} |x_tau|); general policies only.
    double growth_ratio = 0.0;
};

/// Euler-Maruyama for x, left-point sums for y and z. All policies share the same
/// Brownian increments path by path.
std::vector<Ensemble> simulate_linear(const Problem& p, std::span<const LinearPolicy> policies,
                                      const SimulationOptions& opts);

/// Reference simulator for an arbitrary feedback; same noise as simulate_linear.
Ensemble simulate(const Problem& p, const FeedbackPolicy& policy, const SimulationOptions& opts);

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Sample mean and standard error of -exp(-rho (z_T - terminal penalty)).
MCEstimate mc_performance(const Ensemble& e, const Problem& p);

/// Paired estimate of E[utility(a) - utility(b)].
MCEstimate mc_difference(const Ensemble& a, const Ensemble& b, const Problem& p);

/// Linear-growth constant from coefficient norms of the gains and the initial state.
double growth_bound(const LinearPolicy& policy, const Problem& p);

}  // namespace rmm::leqg
