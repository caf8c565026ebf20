#include "rmm/mm/intensity.hpp"

#include "rmm/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rmm::mm {

const char* side_name(Side s) {
    return s == Side::Bid ? "bid" : "ask";
}

IntensityModel IntensityModel::logistic(double lambda_base, double a, double b) {
    IntensityModel m;
    m.kind = Kind::Logistic;
    m.lambda_base = lambda_base;
    m.a = a;
    m.b = b;
    m.validate();
    return m;
}

IntensityModel IntensityModel::exponential(double A, double k) {
    IntensityModel m;
    m.kind = Kind::Exponential;
    m.A = A;
    m.k = k;
    m.validate();
    return m;
}

void IntensityModel::validate() const {
    if (kind == Kind::Logistic) {
        if (!(lambda_base >= 0) || !std::isfinite(a) || !(b > 0))
            throw ConfigError("logistic intensity needs lambda_base >= 0 and b > 0");
    } else {
        if (!(A >= 0) || !(k > 0)) throw ConfigError("exponential intensity needs A >= 0 and k > 0");
    }
}

namespace {

// Logistic fraction 1 / (1 + e^x) computed without overflow.
double logistic_fraction(double x) {
    if (x > 0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

}  // namespace

double IntensityModel::value(double delta) const {
    if (kind == Kind::Logistic) return lambda_base * logistic_fraction(a + b * delta);
    return A * std::exp(-k * delta);
}

double IntensityModel::d1(double delta) const {
    if (kind == Kind::Logistic) {
        const double f = logistic_fraction(a + b * delta);
        return -b * lambda_base * f * (1.0 - f);
    }
    return -k * A * std::exp(-k * delta);
}

double IntensityModel::d2(double delta) const {
    if (kind == Kind::Logistic) {
        const double f = logistic_fraction(a + b * delta);
        return b * b * lambda_base * f * (1.0 - f) * (1.0 - 2.0 * f);
    }
    return k * k * A * std::exp(-k * delta);
}

double IntensityModel::inverse(double y) const {
    if (kind == Kind::Logistic) {
        if (!(y > 0 && y < lambda_base))
            throw RangeError("value " + std::to_string(y) + " outside the range of the logistic intensity");
        return (std::log(lambda_base / y - 1.0) - a) / b;
    }
    if (!(y > 0) || !(A > 0))
        throw RangeError("value " + std::to_string(y) + " outside the range of the exponential intensity");
    return -std::log(y / A) / k;
}

double IntensityModel::scale() const {
    return kind == Kind::Logistic ? 1.0 / b : 1.0 / k;
}

bool IntensityModel::is_zero() const {
    return kind == Kind::Logistic ? lambda_base == 0.0 : A == 0.0;
}

IntensityCheck check_intensity(const IntensityModel& m, double lo, double hi, double step) {
    IntensityCheck c;
    c.decreasing = true;
    double prev = m.value(lo);
    for (double x = lo; x <= hi + 0.5 * step; x += step) {
        const double v = m.value(x), d = m.d1(x);
        if (!(d < 0) || (x > lo && !(v < prev))) c.decreasing = false;
        c.max_ratio = std::max(c.max_ratio, v * m.d2(x) / (d * d));
        prev = v;
    }
    c.vanishes = m.value(hi + 200.0 * m.scale()) < 1e-12 * std::max(1.0, m.value(hi));
    c.ratio_below_two = c.max_ratio < 2.0;
    return c;
}

}  // namespace rmm::mm
