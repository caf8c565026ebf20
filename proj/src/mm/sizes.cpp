#include "rmm/mm/sizes.hpp"

#include "rmm/core/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace rmm::mm {

double SizeDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) m += z[i] * w[i];
    return m;
}

void SizeDistribution::validate() const {
    if (z.empty() || z.size() != w.size()) throw ConfigError("size distribution is empty or ragged");
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] > 0)) throw ConfigError("RFQ sizes must be positive");
        if (!(w[i] > 0)) throw ConfigError("size weights must be positive");
        total += w[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("size weights must sum to one");
}

SizeDistribution SizeDistribution::single(double z) {
    SizeDistribution s{{z}, {1.0}};
    s.validate();
    return s;
}

SizeDistribution discretize_gamma(double alpha, double beta, double bin_width, int n_bins) {
    if (!(alpha > 0) || !(beta > 0)) throw ConfigError("gamma parameters must be positive");
    if (!(bin_width > 0) || n_bins <= 0) throw ConfigError("bins must have positive width and count");
    auto cdf = [&](double x) { return x <= 0 ? 0.0 : boost::math::gamma_p(alpha, beta * x); };
    SizeDistribution s;
    double total = 0.0;
    for (int m = 1; m <= n_bins; ++m) {
        const double c = m * bin_width;
        const double lo = m == 1 && n_bins == 1 ? 0.0 : c - 0.5 * bin_width;
        const double hi = m == 1 && n_bins == 1 ? INFINITY : c + 0.5 * bin_width;
        const double mass = (std::isinf(hi) ? 1.0 : cdf(hi)) - cdf(lo);
        if (mass > 0) {
            s.z.push_back(c);
            s.w.push_back(mass);
            total += mass;
        }
    }
    if (!(total > 0)) throw ConfigError("gamma discretisation has zero total mass");
    for (double& w : s.w) w /= total;
    return s;
}

}  // namespace rmm::mm
