#include "rmm/mm/hjb_grid.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/mm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace rmm::mm {

simd::HermiteTable hamiltonian_table(const IntensityModel& m, double rho, double z, double lo,
                                     double hi, double step) {
    if (!(hi > lo) || !(step > 0)) throw ConfigError("invalid Hamiltonian table range");
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
    simd::HermiteTable t;
    t.p0 = lo;
    t.h = (hi - lo) / static_cast<double>(n - 1);
    t.inv_h = 1.0 / t.h;
    t.f.resize(n);
    t.hdf.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const HamiltonianValue v = hamiltonian(m, rho, z, lo + t.h * static_cast<double>(i));
        t.f[i] = v.H;
        t.hdf[i] = t.h * v.dH;
    }
    return t;
}

namespace {

struct Bucket {
    Side side;
    int offset;  // lattice shift of the post-trade inventory
    double z;
    double weight;
    const IntensityModel* model;
    simd::HermiteTable table;
};

// Thomas factorisation of a constant tridiagonal matrix.
struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    void solve(double* x) const {
        const std::size_t n = diag.size();
        std::vector<double> c(n), d(n);
        c[0] = upper[0] / diag[0];
        d[0] = x[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - lower[i] * c[i - 1];
            c[i] = i + 1 < n ? upper[i] / m : 0.0;
            d[i] = (x[i] - lower[i] * d[i - 1]) / m;
        }
        x[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    }
};

}  // namespace

std::size_t HJBGridSolution::q_index(double qv) const {
    const double u = (qv - q.front()) / (q[1] - q[0]);
    const double k = std::round(u);
    if (std::abs(u - k) > 1e-9 || k < 0 || k >= static_cast<double>(q.size()))
        throw RangeError("inventory " + std::to_string(qv) + " is not on the lattice");
    return static_cast<std::size_t>(k);
}

double HJBGridSolution::theta_at(double qv, double Sv) const {
    const std::size_t iq = q_index(qv);
    const double u = (Sv - S.front()) / (S[1] - S[0]);
    if (u < 0 || u > static_cast<double>(S.size() - 1)) throw RangeError("price outside the lattice");
    const auto i = std::min(static_cast<std::size_t>(u), S.size() - 2);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * at(iq, i) + w * at(iq, i + 1);
}

double HJBGridSolution::quote(double qv, double Sv, double z, Side side, int tier) const {
    const double post = side == Side::Bid ? qv + z : qv - z;
    if (std::abs(post) > cap + 1e-9) return INFINITY;
    const Flow* f = config.find(0, tier, side);
    if (!f) throw ConfigError("no flow for this tier and side");
    const double p = (theta_at(qv, Sv) - theta_at(post, Sv)) / z;
    return quote_shift(f->intensity, config.rho, z, p);
}

HJBGridSolution hjb_grid_solve_1d(const MMConfig& config, const HJBGridSpec& spec) {
    config.validate();
    const MultiOUMarket& mk = config.market;
    if (mk.r != 1 || mk.d != 1) throw ConfigError("the lattice solver needs one asset and no signals");
    if (!(spec.dt > 0) || !(spec.dq > 0) || !(spec.dS > 0) || !(spec.S_span_sd > 0))
        throw ConfigError("lattice steps must be positive");

    const double rho = config.rho;
    const double R = mk.R(0, 0);
    const double sigma2 = mk.Sigma()(0, 0);
    const double Sbar = mk.Sbar[0];
    const double gamma = config.Gamma(0, 0);
    const double eta_inv = config.eta_inv()(0, 0);
    const double cap = config.inventory_cap;

    HJBGridSolution out;
    out.config = config;
    out.cap = cap;
    const int nq_half = static_cast<int>(std::floor(cap / spec.dq + 1e-9));
    for (int k = -nq_half; k <= nq_half; ++k) out.q.push_back(k * spec.dq);
    const double half = 0.5 * spec.S_span_sd * std::sqrt(sigma2 * config.T);
    const int ns_half = std::max(2, static_cast<int>(std::ceil(half / spec.dS)));
    for (int k = -ns_half; k <= ns_half; ++k) out.S.push_back(Sbar + k * spec.dS);
    const std::size_t nq = out.q.size(), ns = out.S.size();

    std::vector<Bucket> buckets;
    for (const Flow& f : config.flows) {
        if (f.intensity.is_zero()) continue;
        for (std::size_t m = 0; m < f.sizes.size(); ++m) {
            const double z = f.sizes.z[m];
            const double ratio = z / spec.dq;
            if (std::abs(ratio - std::round(ratio)) > 1e-9)
                throw ConfigError("RFQ sizes must be multiples of the inventory step");
            const int off = static_cast<int>(std::round(ratio)) * (f.side == Side::Bid ? 1 : -1);
            buckets.push_back({f.side, off, z, z * f.sizes.w[m], &f.intensity,
                               hamiltonian_table(f.intensity, rho, z, spec.p_lo, spec.p_hi,
                                                 spec.p_step)});
        }
    }

    const std::vector<double> tgrid = grid_with_step(0.0, config.T, spec.dt);
    const double dt = tgrid[1] - tgrid[0];
    out.dt = dt;
    out.steps = static_cast<int>(tgrid.size() - 1);
    const double dS = spec.dS;

    // Linear operator: upwind advection (Sbar - S) R d/dS plus diffusion; at the edges the
    // second derivative vanishes and the first derivative is one-sided.
    std::vector<double> drift(ns);
    for (std::size_t i = 0; i < ns; ++i) drift[i] = (Sbar - out.S[i]) * R;
    Tridiagonal sys{std::vector<double>(ns, 0.0), std::vector<double>(ns, 1.0),
                    std::vector<double>(ns, 0.0)};
    const double diff = 0.5 * sigma2 / (dS * dS);
    for (std::size_t i = 0; i < ns; ++i) {
        double lo = 0.0, mid = 0.0, up = 0.0;
        const double b = drift[i];
        const bool edge = i == 0 || i + 1 == ns;
        if (!edge) {
            lo += diff;
            up += diff;
            mid -= 2.0 * diff;
        }
        if ((b > 0 && i + 1 < ns) || i == 0) {
            up += b / dS;
            mid -= b / dS;
        } else {
            lo -= b / dS;
            mid += b / dS;
        }
        sys.lower[i] = -dt * lo;
        sys.diag[i] = 1.0 - dt * mid;
        sys.upper[i] = -dt * up;
    }

    std::vector<double> theta(nq * ns), next(nq * ns), term(ns);
    for (std::size_t iq = 0; iq < nq; ++iq)
        for (std::size_t i = 0; i < ns; ++i) theta[iq * ns + i] = -gamma * out.q[iq] * out.q[iq];

    std::size_t fallback = 0;
    for (int step = out.steps; step > 0; --step) {
        const double t = tgrid[static_cast<std::size_t>(step - 1)];
        for (std::size_t iq = 0; iq < nq; ++iq) {
            const double qv = out.q[iq];
            const double* row = &theta[iq * ns];
            double* dst = &next[iq * ns];
            for (std::size_t i = 0; i < ns; ++i) {
                double dth;
                if (i == 0) dth = (row[1] - row[0]) / dS;
                else if (i + 1 == ns) dth = (row[i] - row[i - 1]) / dS;
                else dth = (row[i + 1] - row[i - 1]) / (2.0 * dS);
                const double g = qv + dth;
                dst[i] = row[i] + dt * (drift[i] * qv - 0.5 * rho * sigma2 * g * g);
            }
            if (eta_inv > 0) {
                const std::size_t a = iq == 0 ? 0 : iq - 1, b = iq + 1 == nq ? iq : iq + 1;
                const double span = out.q[b] - out.q[a];
                for (std::size_t i = 0; i < ns; ++i) {
                    const double dq = (theta[b * ns + i] - theta[a * ns + i]) / span;
                    dst[i] += dt * 0.25 * eta_inv * dq * dq;
                }
            }
            for (const Bucket& bk : buckets) {
                const long target = static_cast<long>(iq) + bk.offset;
                if (target < 0 || target >= static_cast<long>(nq)) continue;
                const double* other = &theta[static_cast<std::size_t>(target) * ns];
                const std::size_t bad = simd::hermite_row(bk.table, bk.weight, 1.0 / bk.z,
                                                          {row, ns}, {other, ns}, term);
                if (bad > 0) {
                    fallback += bad;
                    for (std::size_t i = 0; i < ns; ++i)
                        if (std::isnan(term[i]))
                            term[i] = bk.weight *
                                      hamiltonian(*bk.model, rho, bk.z, (row[i] - other[i]) / bk.z).H;
                }
                for (std::size_t i = 0; i < ns; ++i) dst[i] += dt * term[i];
            }
            sys.solve(dst);
            for (std::size_t i = 0; i < ns; ++i)
                if (!std::isfinite(dst[i]) || std::abs(dst[i]) > spec.divergence_cap)
                    throw GridDivergence("lattice value function diverged", t, dt, dS);
        }
        theta.swap(next);
    }
    out.theta = std::move(theta);
    out.fallback_evaluations = fallback;
    return out;
}

}  // namespace rmm::mm
