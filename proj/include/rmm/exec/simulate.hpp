#pragma once

#include "rmm/exec/engine.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rmm::exec {

using SpeedPolicy = std::function<Vec(double t, const Vec& q, const Vec& S)>;

struct ExecSimOptions {
    double dt = 1e-3;
    std::size_t n_paths = 100;
    std::uint64_t seed = 1;
    std::size_t recorded_paths = 1;
    std::size_t record_stride = 10;
};

struct ExecTrace {
    std::vector<double> t;
    std::vector<Vec> S, b, q;
    std::vector<double> X;
};

struct ExecOutcome {
    Vec S_T, b_T, q_T;
    double X_T = 0.0;
    /// (X0 + q0' J S0) - (X_T + q_T' J S_T - q_T' Gamma q_T).
    double shortfall = 0.0;
};

struct ExecSimulation {
    std::vector<ExecOutcome> paths;
    std::vector<ExecTrace> traces;
    double mean_shortfall = 0.0;
    double se_shortfall = 0.0;
};

/// Prices follow dS = mu dt + V dW with the true drift mu; the policy sees only (t, q, S).
ExecSimulation simulate_execution(const Vec& true_mu, const Mat& V, const DriftPosterior& post,
                                  const ExecConfig& config, const SpeedPolicy& policy,
                                  const ExecSimOptions& opts);

ExecSimulation simulate_execution(const Vec& true_mu, const Mat& V, const ExecutionEngine& engine,
                                  const ExecSimOptions& opts);

}  // namespace rmm::exec
