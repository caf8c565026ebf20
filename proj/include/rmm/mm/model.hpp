#pragma once

#include "rmm/core/linalg.hpp"
#include "rmm/mm/intensity.hpp"
#include "rmm/mm/sizes.hpp"
#include "rmm/riccati/dre.hpp"

#include <optional>
#include <vector>

namespace rmm::mm {

/// dS = R (Sbar - S) dt + V dW over r traded assets followed by k signals (d = r + k).
struct MultiOUMarket {
    int r = 0;
    int d = 0;
    Vec S0;
    Vec Sbar;
    Mat R;
    Mat V;

    Mat Sigma() const { return V * V.transpose(); }
    /// r x d selector of the traded assets.
    Mat J() const;
    void validate() const;
};

/// RFQ flow of one client tier on one side of one asset.
struct Flow {
    int asset = 0;
    int tier = 0;
    Side side = Side::Bid;
    IntensityModel intensity;
    SizeDistribution sizes;
};

struct MMConfig {
    MultiOUMarket market;
    std::vector<Flow> flows;
    double rho = 0.0;
    Mat Gamma;
    std::optional<Mat> eta;
    double T = 0.0;
    double inventory_cap = 600.0;

    int tiers() const;
    /// Zero when eta is absent.
    Mat eta_inv() const;
    const Flow* find(int asset, int tier, Side side) const;
    void validate() const;
};

/// Per-asset moments v_{j,m} = sum over tiers of sum_z z^m alpha_j(z) w(z).
struct SideMoments {
    Vec v01, v11, v12, v21, v22, v23;
    static SideMoments zero(int r);
};

struct Moments {
    SideMoments bid;
    SideMoments ask;
    static Moments zero(int r);
};

Moments aggregate_moments(const MMConfig& config);

/// Everything the quadratic approximation needs; shared by market making and execution.
struct QuadraticModel {
    int r = 0;
    int d = 0;
    double rho = 0.0;
    double T = 0.0;
    Mat Sigma;
    MatFn R;
    Vec Sbar;
    Mat eta_inv;
    Mat Gamma;
    Moments moments;

    Mat J() const;
    /// eta^{-1} + 2 (V_{2,1}^b + V_{2,1}^a).
    Mat W() const;
};

QuadraticModel quadratic_model(const MMConfig& config, const Moments& moments);

/// DRE for P = [[A, B/2], [B'/2, C]] with the inventory block first.
DRECoefficients build_quadratic_dre(const QuadraticModel& m);
DRECoefficients build_mm_dre(const MMConfig& config, const Moments& moments);

/// Block form of the same problem with x = S, y = q. Shifting its solution by K and
/// applying the congruence Z gives the solution of build_quadratic_dre.
struct GeneralForm {
    BlockSpec spec;
    Mat K;
    Mat Z;
};

GeneralForm general_form(const QuadraticModel& m);

}  // namespace rmm::mm
