#pragma once

#include "rmm/exec/posterior.hpp"
#include "rmm/mm/linear_terms.hpp"

namespace rmm::exec {

/// Execution problem for r traded assets among the d observed prices.
struct ExecConfig {
    int r = 0;
    double rho = 0.0;
    Mat eta;    // r x r
    Mat Gamma;  // r x r
    double T = 0.0;
    Vec q0;
    double X0 = 0.0;
    void validate(int d) const;
};

/// The quadratic problem with every RFQ moment zero and the learning drift.
mm::QuadraticModel exec_model(const DriftPosterior& post, const ExecConfig& config);

DRECoefficients build_exec_dre(const DriftPosterior& post, const ExecConfig& config);

class ExecutionEngine {
public:
    ExecutionEngine(DriftPosterior post, ExecConfig config, double dt, const SolverOptions& opts = {});

    const DriftPosterior& posterior() const { return post_; }
    const ExecConfig& config() const { return config_; }
    const RiccatiSolution& riccati() const { return riccati_; }
    const mm::ApproxValue& value() const { return value_; }

    /// 0.5 eta^{-1} (2 A q + B S + D).
    Vec trading_speed(double t, const Vec& q, const Vec& S) const;

private:
    DriftPosterior post_;
    ExecConfig config_;
    mm::QuadraticModel model_;
    RiccatiSolution riccati_;
    mm::ApproxValue value_;
};

Vec trading_speed(const ExecutionEngine& engine, double t, const Vec& q, const Vec& S);

}  // namespace rmm::exec
