#include "rmm/mm/model.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/mm/hamiltonian.hpp"
#include "rmm/riccati/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace rmm::mm {

namespace {

Mat selector(int r, int d) {
    Mat j = Mat::Zero(r, d);
    for (int i = 0; i < r; ++i) j(i, i) = 1.0;
    return j;
}

}  // namespace

Mat MultiOUMarket::J() const {
    return selector(r, d);
}

void MultiOUMarket::validate() const {
    if (r <= 0 || d < r) throw DimensionError("market needs 0 < r <= d");
    if (S0.size() != d || Sbar.size() != d) throw DimensionError("S0 and Sbar must have d entries");
    if (R.rows() != d || R.cols() != d) throw DimensionError("R must be d x d");
    if (V.rows() != d || V.cols() < 1) throw DimensionError("V must have d rows");
    if (!R.allFinite() || !V.allFinite() || !S0.allFinite() || !Sbar.allFinite())
        throw ConfigError("market parameters must be finite");
}

int MMConfig::tiers() const {
    int n = 0;
    for (const Flow& f : flows) n = std::max(n, f.tier + 1);
    return n;
}

Mat MMConfig::eta_inv() const {
    const int r = market.r;
    if (!eta) return Mat::Zero(r, r);
    return symmetrize(checked_inverse(*eta, "eta"));
}

const Flow* MMConfig::find(int asset, int tier, Side side) const {
    for (const Flow& f : flows)
        if (f.asset == asset && f.tier == tier && f.side == side) return &f;
    return nullptr;
}

void MMConfig::validate() const {
    market.validate();
    const int r = market.r;
    if (!(rho > 0) || !std::isfinite(rho)) throw ConfigError("rho must be positive");
    if (!(T > 0)) throw ConfigError("horizon T must be positive");
    if (!(inventory_cap > 0)) throw ConfigError("inventory cap must be positive");
    if (Gamma.rows() != r || Gamma.cols() != r) throw DimensionError("Gamma must be r x r");
    if (!is_psd(Gamma)) throw NotPSD("Gamma must be positive semidefinite");
    if (eta) {
        if (eta->rows() != r || eta->cols() != r) throw DimensionError("eta must be r x r");
        if (!is_pd(*eta)) throw NotPSD("eta must be positive definite");
    }
    std::set<std::tuple<int, int, int>> seen;
    std::set<int> quoted;
    for (const Flow& f : flows) {
        if (f.asset < 0 || f.asset >= r) throw ConfigError("flow refers to an unknown asset");
        if (f.tier < 0) throw ConfigError("flow tier must be non-negative");
        if (!seen.insert({f.asset, f.tier, static_cast<int>(f.side)}).second)
            throw ConfigError("duplicate flow for asset " + std::to_string(f.asset) + ", tier " +
                              std::to_string(f.tier) + ", " + side_name(f.side));
        f.intensity.validate();
        f.sizes.validate();
        quoted.insert(f.asset);
    }
    const int n = tiers();
    for (int a : quoted)
        for (int t = 0; t < n; ++t)
            for (Side s : {Side::Bid, Side::Ask})
                if (!find(a, t, s))
                    throw ConfigError("missing flow for asset " + std::to_string(a) + ", tier " +
                                      std::to_string(t) + ", " + side_name(s));
}

SideMoments SideMoments::zero(int r) {
    Vec z = Vec::Zero(r);
    return {z, z, z, z, z, z};
}

Moments Moments::zero(int r) {
    return {SideMoments::zero(r), SideMoments::zero(r)};
}

Moments aggregate_moments(const MMConfig& config) {
    config.validate();
    Moments m = Moments::zero(config.market.r);
    for (const Flow& f : config.flows) {
        if (f.intensity.is_zero()) continue;
        SideMoments& s = f.side == Side::Bid ? m.bid : m.ask;
        for (std::size_t k = 0; k < f.sizes.size(); ++k) {
            const double z = f.sizes.z[k], w = f.sizes.w[k];
            const TaylorAlphas a = taylor_alphas(f.intensity, config.rho, z);
            s.v01[f.asset] += w * z * a.a0;
            s.v11[f.asset] += w * z * a.a1;
            s.v12[f.asset] += w * z * z * a.a1;
            s.v21[f.asset] += w * z * a.a2;
            s.v22[f.asset] += w * z * z * a.a2;
            s.v23[f.asset] += w * z * z * z * a.a2;
        }
    }
    return m;
}

Mat QuadraticModel::J() const {
    return selector(r, d);
}

Mat QuadraticModel::W() const {
    Mat v = (moments.bid.v21 + moments.ask.v21).asDiagonal();
    return eta_inv + 2.0 * v;
}

QuadraticModel quadratic_model(const MMConfig& config, const Moments& moments) {
    config.validate();
    QuadraticModel q;
    q.r = config.market.r;
    q.d = config.market.d;
    q.rho = config.rho;
    q.T = config.T;
    q.Sigma = config.market.Sigma();
    q.R = constant(config.market.R);
    q.Sbar = config.market.Sbar;
    q.eta_inv = config.eta_inv();
    q.Gamma = config.Gamma;
    q.moments = moments;
    return q;
}

DRECoefficients build_quadratic_dre(const QuadraticModel& m) {
    const int r = m.r, d = m.d, n = r + d;
    const Mat W = m.W();
    if (!is_psd(W)) throw NotPSD("eta^{-1} + 2(V21b + V21a) must be positive semidefinite");
    const Mat J = m.J();
    const Mat sigma_r = J * m.Sigma * J.transpose();
    const double rho = m.rho;
    const Mat Sigma = m.Sigma;
    const MatFn R = m.R;
    DRECoefficients c;
    c.n = n;
    c.Q = [=](double t) {
        Mat q = Mat::Zero(n, n);
        Mat jr = J * R(t);
        q.topLeftCorner(r, r) = 0.5 * rho * sigma_r;
        q.topRightCorner(r, d) = 0.5 * jr;
        q.bottomLeftCorner(d, r) = 0.5 * jr.transpose();
        return q;
    };
    c.Y = [=](double t) {
        Mat y = Mat::Zero(n, n);
        y.bottomLeftCorner(d, r) = rho * Sigma * J.transpose();
        y.bottomRightCorner(d, d) = R(t);
        return y;
    };
    Mat u = Mat::Zero(n, n);
    u.topLeftCorner(r, r) = -W;
    u.bottomRightCorner(d, d) = 2.0 * rho * Sigma;
    c.U = constant(symmetrize(u));
    c.P_T = Mat::Zero(n, n);
    c.P_T.topLeftCorner(r, r) = -m.Gamma;
    return c;
}

DRECoefficients build_mm_dre(const MMConfig& config, const Moments& moments) {
    return build_quadratic_dre(quadratic_model(config, moments));
}

GeneralForm general_form(const QuadraticModel& m) {
    const int r = m.r, d = m.d;
    const Mat J = m.J();
    const Mat W = m.W();
    const Mat Sigma = m.Sigma;
    const MatFn R = m.R;
    GeneralForm g;
    BlockSpec& s = g.spec;
    s.d = d;
    s.r = r;
    s.rho = m.rho;
    s.Q11 = constant(symmetrize(-0.25 * J.transpose() * W * J));
    s.Y11 = R;
    s.Y21 = constant(Mat(0.5 * W * J));
    s.U11 = constant(Mat(2.0 * Sigma));
    s.U22 = constant(W);
    s.Psi = Mat::Zero(d, d);
    s.Upsilon = -J.transpose();
    s.Gamma = m.Gamma;
    g.K = Mat::Zero(d + r, d + r);
    g.K.topRightCorner(d, r) = 0.5 * J.transpose();
    g.K.bottomLeftCorner(r, d) = 0.5 * J;
    g.Z = block_swap(d, r).transpose();
    return g;
}

}  // namespace rmm::mm
