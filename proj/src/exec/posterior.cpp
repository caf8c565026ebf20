#include "rmm/exec/posterior.hpp"

#include "rmm/core/errors.hpp"

namespace rmm::exec {

void DriftPrior::validate() const {
    if (b0.size() == 0) throw DimensionError("prior mean is empty");
    if (Pi0.rows() != b0.size() || Pi0.cols() != b0.size())
        throw DimensionError("prior covariance must be d x d");
    if (symmetry_defect(Pi0) > 1e-12 * std::max(1.0, max_abs(Pi0)))
        throw ConfigError("prior covariance must be symmetric");
    if (!is_pd(Pi0)) throw NotPSD("prior covariance must be positive definite");
}

DriftPosterior::DriftPosterior(DriftPrior prior, Mat Sigma, Vec S0)
    : prior_(std::move(prior)), Sigma_(std::move(Sigma)), S0_(std::move(S0)) {
    prior_.validate();
    const auto d = prior_.b0.size();
    if (Sigma_.rows() != d || Sigma_.cols() != d || S0_.size() != d)
        throw DimensionError("Sigma and S0 must match the prior dimension");
    Sigma_inv_ = symmetrize(checked_inverse(Sigma_, "Sigma"));
    Pi0_inv_ = symmetrize(checked_inverse(prior_.Pi0, "Pi0"));
    Sigma_Pi0_inv_ = Sigma_ * Pi0_inv_;
    Sbar_ = S0_ - Sigma_Pi0_inv_ * prior_.b0;
}

Mat DriftPosterior::Pi(double t) const {
    if (t < 0) throw RangeError("posterior time must be non-negative");
    return symmetrize(checked_inverse(Pi0_inv_ + t * Sigma_inv_, "posterior precision"));
}

Vec DriftPosterior::mean(double t, const Vec& S) const {
    if (S.size() != S0_.size()) throw DimensionError("price has the wrong size");
    return Pi(t) * (Sigma_inv_ * (S - S0_) + Pi0_inv_ * prior_.b0);
}

Mat DriftPosterior::R(double t) const {
    if (t < 0) throw RangeError("posterior time must be non-negative");
    const Mat m = Sigma_Pi0_inv_ + t * Mat::Identity(dim(), dim());
    return -checked_inverse(m, "Sigma Pi0^{-1} + t I");
}

Vec posterior_mean(const DriftPosterior& post, double t, const Vec& S) {
    return post.mean(t, S);
}

EffectiveDynamics effective_dynamics(const DriftPosterior& post) {
    return {[post](double t) { return post.R(t); }, post.Sbar()};
}

}  // namespace rmm::exec
