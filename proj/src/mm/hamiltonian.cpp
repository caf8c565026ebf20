#include "rmm/mm/hamiltonian.hpp"

#include "rmm/core/errors.hpp"

#include <cmath>

namespace rmm::mm {

namespace {

constexpr double kGolden = 0.6180339887498949;

void check_args(double rho, double z) {
    if (!(rho > 0) || !std::isfinite(rho)) throw ConfigError("rho must be positive");
    if (!(z > 0) || !std::isfinite(z)) throw ConfigError("RFQ size must be positive");
}

// Objective as a function of the excess x = delta - p > 0.
struct Objective {
    const IntensityModel& m;
    double c;
    double p;

    double operator()(double x) const { return m.value(p + x) * (-std::expm1(-c * x)) / c; }

    // First-order condition g(x) = 0 and its derivative.
    std::pair<double, double> foc(double x) const {
        const double e = std::exp(-c * x);
        const double one_minus = -std::expm1(-c * x);
        const double l = m.value(p + x), l1 = m.d1(p + x), l2 = m.d2(p + x);
        const double g = l1 * one_minus + c * l * e;
        const double dg = l2 * one_minus + 2.0 * c * l1 * e - c * c * l * e;
        return {g, dg};
    }
};

std::pair<double, double> bracket(const Objective& f, double scale) {
    constexpr int lo_exp = -30, hi_exp = 24;
    double best_f = 0.0;
    int best_i = lo_exp - 1;
    for (int i = lo_exp; i <= hi_exp; ++i) {
        const double x = std::ldexp(scale, i);
        const double v = f(x);
        if (v > best_f) {
            best_f = v;
            best_i = i;
        }
    }
    if (best_i == hi_exp)
        throw NotBracketed("Hamiltonian maximiser not bracketed (p=" + std::to_string(f.p) + ")");
    if (best_i < lo_exp) {
        // Objective never positive: no fills are worth quoting for.
        throw NotBracketed("Hamiltonian objective is not positive (p=" + std::to_string(f.p) + ")");
    }
    const double lo = best_i == lo_exp ? 0.0 : std::ldexp(scale, best_i - 1);
    const double hi = std::ldexp(scale, best_i + 1);
    return {lo, hi};
}

double golden(const Objective& f, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 400 && (b - a) > tol * std::max(1.0, std::abs(a)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double maximise(const Objective& f, double scale, bool polish) {
    auto [lo, hi] = bracket(f, scale);
    double x = golden(f, lo, hi, 1e-12);
    if (!polish) return x;
    for (int it = 0; it < 8; ++it) {
        auto [g, dg] = f.foc(x);
        if (!(dg < 0)) break;
        const double next = x - g / dg;
        if (!(next > lo && next < hi)) break;
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

}  // namespace

HamiltonianValue hamiltonian(const IntensityModel& m, double rho, double z, double p) {
    check_args(rho, z);
    if (!std::isfinite(p)) throw RangeError("non-finite Hamiltonian argument");
    if (m.is_zero()) return {0.0, 0.0, INFINITY};
    const double c = rho * z;
    Objective f{m, c, p};
    const double x = maximise(f, m.scale(), true);
    return {f(x), -m.value(p + x) * std::exp(-c * x), p + x};
}

double hamiltonian_exp_closed_form(double A, double k, double rho, double z, double p) {
    if (!(A > 0) || !(k > 0) || !(z > 0) || !(rho > 0))
        throw ConfigError("closed-form Hamiltonian needs positive A, k, rho, z");
    const double c = rho * z;
    return (A / k) * std::exp(-(1.0 + k / c) * std::log1p(c / k) - k * p);
}

double quote_shift(const IntensityModel& m, double rho, double z, const HamiltonianValue& h) {
    return m.inverse(rho * z * h.H - h.dH);
}

double quote_shift(const IntensityModel& m, double rho, double z, double p) {
    check_args(rho, z);
    if (m.is_zero()) throw RangeError("quote shift undefined for a zero intensity");
    return quote_shift(m, rho, z, hamiltonian(m, rho, z, p));
}

double argmax_golden(const IntensityModel& m, double rho, double z, double p, double tol) {
    check_args(rho, z);
    Objective f{m, rho * z, p};
    auto [lo, hi] = bracket(f, m.scale());
    return p + golden(f, lo, hi, tol);
}

TaylorAlphas taylor_alphas(const IntensityModel& m, double rho, double z) {
    check_args(rho, z);
    if (m.is_zero()) return {};
    HamiltonianValue h0 = hamiltonian(m, rho, z, 0.0);
    TaylorAlphas a;
    a.a0 = h0.H;
    if (m.kind == IntensityModel::Kind::Exponential) {
        a.a1 = -m.k * a.a0;
        a.a2 = m.k * m.k * a.a0;
        return a;
    }
    constexpr double step = 1e-4;
    a.a1 = h0.dH;
    a.a2 = (hamiltonian(m, rho, z, step).dH - hamiltonian(m, rho, z, -step).dH) / (2.0 * step);
    return a;
}

}  // namespace rmm::mm
