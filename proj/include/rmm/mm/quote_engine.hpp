#pragma once

#include "rmm/mm/linear_terms.hpp"
#include "rmm/mm/model.hpp"

namespace rmm::mm {

/// Quotes and hedge speeds from the quadratic approximation of the value function.
/// Evaluation is const and safe to share between threads.
class QuoteEngine {
public:
    QuoteEngine(MMConfig config, double dt, const SolverOptions& opts = {});

    const MMConfig& config() const { return config_; }
    const Moments& moments() const { return moments_; }
    const QuadraticModel& model() const { return model_; }
    const RiccatiSolution& riccati() const { return riccati_; }
    const ApproxValue& value() const { return value_; }

    /// (theta(q) - theta(q + z e_i)) / z at the bid, (theta(q) - theta(q - z e_i)) / z at the ask.
    double liquidity_argument(const ValueSlice& v, const Vec& q, const Vec& S, double z, int asset,
                              Side side) const;

    /// Closed form for exponential intensities, numeric quote shift otherwise.
    double approx_quote(double t, const Vec& q, const Vec& S, double z, int asset, int tier,
                        Side side) const;
    double approx_quote(const ValueSlice& v, const Vec& q, const Vec& S, double z, int asset,
                        int tier, Side side) const;
    /// Always through the numeric quote shift.
    double generic_quote(const ValueSlice& v, const Vec& q, const Vec& S, double z, int asset,
                         int tier, Side side) const;
    /// Exponential intensities only.
    double closed_form_quote(const ValueSlice& v, const Vec& q, const Vec& S, double z, int asset,
                             int tier, Side side) const;

    /// 0.5 eta^{-1} (2 A q + B S + D); requires eta.
    Vec hedge_speed(double t, const Vec& q, const Vec& S) const;
    Vec hedge_speed(const ValueSlice& v, const Vec& q, const Vec& S) const;

private:
    const Flow& flow(int asset, int tier, Side side) const;
    void check_state(const Vec& q, const Vec& S) const;

    MMConfig config_;
    Moments moments_;
    QuadraticModel model_;
    RiccatiSolution riccati_;
    ApproxValue value_;
};

}  // namespace rmm::mm
