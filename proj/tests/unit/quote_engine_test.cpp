#include "fixtures.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/mm/hamiltonian.hpp"
#include "rmm/mm/quote_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rmm;
using namespace rmm::mm;

namespace {

const Vec& at100() {
    static const Vec s = Vec::Constant(1, 100.0);
    return s;
}

Vec one(double x) {
    return Vec::Constant(1, x);
}

MMConfig exponential_two_assets() {
    MMConfig c = fixtures::two_assets(2.0);
    for (Flow& f : c.flows) f.intensity = IntensityModel::exponential(20.0, 15.0);
    c.flows[0].intensity = IntensityModel::exponential(25.0, 12.0);
    c.market.R << 0.5, -0.2, -0.3, 0.4;
    return c;
}

}  // namespace

TEST(QuoteEngine, SymmetricAtZeroInventory) {
    const QuoteEngine e(fixtures::single_asset(0.0), 1e-3);
    const double bid = e.approx_quote(0.0, one(0.0), at100(), 100.0, 0, 0, Side::Bid);
    const double ask = e.approx_quote(0.0, one(0.0), at100(), 100.0, 0, 0, Side::Ask);
    EXPECT_NEAR(bid, ask, 1e-12);
    EXPECT_TRUE(std::isfinite(bid));
}

TEST(QuoteEngine, MonotoneInInventory) {
    const QuoteEngine e(fixtures::single_asset(0.0), 1e-3);
    double prev_bid = -INFINITY, prev_ask = INFINITY;
    for (double q = -600.0; q <= 600.0; q += 25.0) {
        const double bid = e.approx_quote(0.0, one(q), at100(), 100.0, 0, 0, Side::Bid);
        const double ask = e.approx_quote(0.0, one(q), at100(), 100.0, 0, 0, Side::Ask);
        EXPECT_GE(bid, prev_bid);
        EXPECT_LE(ask, prev_ask);
        prev_bid = bid;
        prev_ask = ask;
    }
}

TEST(QuoteEngine, MonotoneInSize) {
    const QuoteEngine e(fixtures::single_asset(0.0), 1e-3);
    double prev = -INFINITY;
    for (double z : fixtures::gamma_sizes().z) {
        const double bid = e.approx_quote(0.0, one(0.0), at100(), z, 0, 0, Side::Bid);
        EXPECT_GE(bid, prev);
        prev = bid;
    }
}

TEST(QuoteEngine, ConstantInPriceWithoutMeanReversion) {
    const QuoteEngine e(fixtures::single_asset(0.0), 1e-3);
    for (Side s : {Side::Bid, Side::Ask}) {
        const double ref = e.approx_quote(0.0, one(100.0), at100(), 100.0, 0, 0, s);
        for (double S : {95.0, 98.0, 102.0, 107.0})
            EXPECT_NEAR(e.approx_quote(0.0, one(100.0), one(S), 100.0, 0, 0, s), ref, 1e-12);
    }
}

TEST(QuoteEngine, SpeculativeTilt) {
    const QuoteEngine e(fixtures::single_asset(0.1), 1e-3);
    auto quote = [&](double S, Side s) { return e.approx_quote(0.0, one(0.0), one(S), 100.0, 0, 0, s); };
    EXPECT_GT(quote(102.0, Side::Bid), quote(100.0, Side::Bid));
    EXPECT_LT(quote(102.0, Side::Ask), quote(100.0, Side::Ask));
    EXPECT_LT(quote(98.0, Side::Bid), quote(100.0, Side::Bid));
    EXPECT_GT(quote(98.0, Side::Ask), quote(100.0, Side::Ask));
}

TEST(QuoteEngine, CointegrationTilt) {
    const QuoteEngine e(fixtures::two_assets(), 1e-3);
    const Vec q = Vec::Zero(2), base = Vec::Constant(2, 100.0);
    Vec wide(2);
    wide << 101.0, 99.0;
    auto quote = [&](const Vec& S, int asset, Side s) { return e.approx_quote(0.0, q, S, 100.0, asset, 0, s); };
    EXPECT_GT(quote(wide, 0, Side::Bid), quote(base, 0, Side::Bid));
    EXPECT_GT(quote(wide, 1, Side::Ask), quote(base, 1, Side::Ask));
    EXPECT_LT(quote(wide, 0, Side::Ask), quote(base, 0, Side::Ask));
    EXPECT_LT(quote(wide, 1, Side::Bid), quote(base, 1, Side::Bid));
}

TEST(QuoteEngine, GenericEqualsShiftOfArgument) {
    const QuoteEngine e(fixtures::two_assets(1.0), 1e-3);
    const ValueSlice v = e.value().at(0.3);
    Vec q(2), S(2);
    q << 75.0, -50.0;
    S << 100.5, 99.0;
    for (Side s : {Side::Bid, Side::Ask}) {
        Vec moved = q;
        moved[1] += s == Side::Bid ? 50.0 : -50.0;
        const double p = (v.theta(q, S) - v.theta(moved, S)) / 50.0;
        EXPECT_NEAR(e.liquidity_argument(v, q, S, 50.0, 1, s), p, 1e-10);
        EXPECT_NEAR(e.approx_quote(v, q, S, 50.0, 1, 0, s), quote_shift(fixtures::logistic_flow(), 5e-3, 50.0, p),
                    1e-12);
    }
}

TEST(QuoteEngine, ExponentialClosedFormMatchesGeneric) {
    const QuoteEngine e(exponential_two_assets(), 1e-3);
    Vec q(2), S(2);
    q << 100.0, -25.0;
    S << 101.0, 99.5;
    for (double t : {0.0, 1.0}) {
        const ValueSlice v = e.value().at(t);
        for (int a = 0; a < 2; ++a)
            for (Side s : {Side::Bid, Side::Ask})
                for (double z : {25.0, 100.0})
                    EXPECT_NEAR(e.closed_form_quote(v, q, S, z, a, 0, s), e.generic_quote(v, q, S, z, a, 0, s), 1e-10);
    }
    EXPECT_THROW(QuoteEngine(fixtures::two_assets(1.0), 1e-2)
                     .closed_form_quote(ValueSlice{}, Vec::Zero(2), Vec::Zero(2), 1.0, 0, 0, Side::Bid),
                 ConfigError);
}

TEST(QuoteEngine, HedgeSpeed) {
    MMConfig cfg = fixtures::single_asset(0.0);
    cfg.eta = Mat::Constant(1, 1, 40.0);
    const QuoteEngine e(cfg, 1e-3);
    EXPECT_EQ(e.hedge_speed(0.0, one(0.0), one(0.0))[0], 0.0);
    const ValueSlice v = e.value().at(0.5);
    const Vec q = one(120.0), S = one(101.0);
    const double fd = (v.theta(one(120.0 + 1e-2), S) - v.theta(one(120.0 - 1e-2), S)) / 2e-2;
    EXPECT_NEAR(e.hedge_speed(0.5, q, S)[0], 0.5 / 40.0 * fd, 1e-8);
    EXPECT_LT(e.hedge_speed(0.5, q, S)[0], 0.0);
}

TEST(QuoteEngine, HedgeSpeedTwoAssets) {
    MMConfig cfg = fixtures::two_assets(1.0);
    Mat eta(2, 2);
    eta << 30.0, 5.0, 5.0, 20.0;
    cfg.eta = eta;
    const QuoteEngine e(cfg, 1e-3);
    const ValueSlice v = e.value().at(0.2);
    Vec q(2), S(2);
    q << 50.0, -80.0;
    S << 100.3, 99.9;
    Vec grad(2);
    for (int i = 0; i < 2; ++i) {
        Vec h = Vec::Zero(2);
        h[i] = 1e-2;
        grad[i] = (v.theta(q + h, S) - v.theta(q - h, S)) / 2e-2;
    }
    EXPECT_LE((e.hedge_speed(v, q, S) - 0.5 * eta.inverse() * grad).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(QuoteEngine, Errors) {
    const QuoteEngine e(fixtures::single_asset(0.0, 1e-3, 1.0), 1e-2);
    EXPECT_THROW(e.hedge_speed(0.0, one(0.0), at100()), ConfigError);
    EXPECT_THROW(e.approx_quote(0.0, one(601.0), at100(), 100.0, 0, 0, Side::Bid), RangeError);
    EXPECT_THROW(e.approx_quote(0.0, one(0.0), at100(), 100.0, 0, 3, Side::Bid), ConfigError);
    EXPECT_THROW(e.approx_quote(0.0, Vec::Zero(2), at100(), 100.0, 0, 0, Side::Bid), DimensionError);
    EXPECT_THROW(QuoteEngine(fixtures::single_asset(0.0), 0.0), ConfigError);
}
