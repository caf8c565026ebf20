#pragma once

#include "rmm/mm/hjb_grid.hpp"
#include "rmm/mm/quote_engine.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rmm::mm {

/// Feedback quoting and hedging rule used by the event simulator.
class QuotePolicy {
public:
    virtual ~QuotePolicy() = default;
    /// Shift for an RFQ; +inf means no quote.
    virtual double shift(double t, const Vec& q, const Vec& S, double z, int asset, int tier,
                         Side side) const = 0;
    /// Buying speed in the dealer-to-dealer market.
    virtual Vec hedge(double t, const Vec& q, const Vec& S) const;
};

class EnginePolicy : public QuotePolicy {
public:
    explicit EnginePolicy(const QuoteEngine& engine) : engine_(engine) {}
    double shift(double t, const Vec& q, const Vec& S, double z, int asset, int tier,
                 Side side) const override;
    Vec hedge(double t, const Vec& q, const Vec& S) const override;

private:
    const QuoteEngine& engine_;
};

/// Lattice quotes at t = 0 applied at every time (prices clamped to the lattice).
class GridPolicy : public QuotePolicy {
public:
    explicit GridPolicy(const HJBGridSolution& grid) : grid_(grid) {}
    double shift(double t, const Vec& q, const Vec& S, double z, int asset, int tier,
                 Side side) const override;

private:
    const HJBGridSolution& grid_;
};

/// Constant shift per (side, size index).
class FixedPolicy : public QuotePolicy {
public:
    FixedPolicy(std::vector<double> z, std::vector<double> bid, std::vector<double> ask)
        : z_(std::move(z)), bid_(std::move(bid)), ask_(std::move(ask)) {}
    double shift(double t, const Vec& q, const Vec& S, double z, int asset, int tier,
                 Side side) const override;

private:
    std::vector<double> z_, bid_, ask_;
};

struct MMSimOptions {
    double dt = 1e-3;
    std::size_t n_paths = 100;
    std::uint64_t seed = 1;
    std::size_t recorded_paths = 1;
    std::size_t record_stride = 10;
};

struct FillEvent {
    double t = 0.0;
    int asset = 0;
    int tier = 0;
    Side side = Side::Bid;
    double z = 0.0;
    double delta = 0.0;
};

struct PathTrace {
    std::vector<double> t;
    std::vector<Vec> S;
    std::vector<Vec> q;
    std::vector<double> X;
    std::vector<FillEvent> fills;
};

struct PathOutcome {
    Vec S_T;
    Vec q_T;
    double X_T = 0.0;
    std::size_t bid_fills = 0;
    std::size_t ask_fills = 0;
    std::size_t negative_quotes = 0;
    std::size_t refused_quotes = 0;
    /// X_T + q_T' J S_T - q_T' Gamma q_T.
    double pnl = 0.0;
};

struct MMSimulation {
    std::vector<PathOutcome> paths;
    std::vector<PathTrace> traces;
    std::vector<std::string> warnings;
    double mean_bid_fills_per_day = 0.0;
    double se_bid_fills_per_day = 0.0;
    double mean_ask_fills_per_day = 0.0;
    double se_ask_fills_per_day = 0.0;
    double mean_utility = 0.0;
    double se_utility = 0.0;
};

/// Exact Gaussian transition of the multi-OU prices over dt: S' = Sbar + Phi (S - Sbar) + L N.
struct OUTransition {
    Mat Phi;
    Mat L;
};
OUTransition ou_transition(const MultiOUMarket& m, double dt);

/// RFQs arrive per (asset, tier, side, size) bucket by thinning a Poisson envelope.
MMSimulation simulate_mm(const MMConfig& config, const QuotePolicy& policy,
                         const MMSimOptions& opts);

}  // namespace rmm::mm
