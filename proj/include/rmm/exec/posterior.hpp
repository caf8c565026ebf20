#pragma once

#include "rmm/core/linalg.hpp"

namespace rmm::exec {

/// Gaussian prior N(b0, Pi0) on the unknown price drift.
struct DriftPrior {
    Vec b0;
    Mat Pi0;
    void validate() const;
};

/// Posterior of the drift given the observed prices, in closed form.
class DriftPosterior {
public:
    DriftPosterior(DriftPrior prior, Mat Sigma, Vec S0);

    const DriftPrior& prior() const { return prior_; }
    const Mat& Sigma() const { return Sigma_; }
    const Vec& S0() const { return S0_; }
    int dim() const { return static_cast<int>(S0_.size()); }

    /// (Pi0^{-1} + t Sigma^{-1})^{-1}.
    Mat Pi(double t) const;
    /// Pi(t) (Sigma^{-1} (S - S0) + Pi0^{-1} b0).
    Vec mean(double t, const Vec& S) const;
    /// -(Sigma Pi0^{-1} + t I)^{-1}.
    Mat R(double t) const;
    /// S0 - Sigma Pi0^{-1} b0.
    const Vec& Sbar() const { return Sbar_; }

private:
    DriftPrior prior_;
    Mat Sigma_;
    Vec S0_;
    Mat Sigma_inv_;
    Mat Pi0_inv_;
    Mat Sigma_Pi0_inv_;
    Vec Sbar_;
};

Vec posterior_mean(const DriftPosterior& post, double t, const Vec& S);

/// dS = R(t) (Sbar - S) dt + V dW under the observation filtration.
struct EffectiveDynamics {
    MatFn R;
    Vec Sbar;
};

EffectiveDynamics effective_dynamics(const DriftPosterior& post);

}  // namespace rmm::exec
