#pragma once

#include <vector>

namespace rmm::mm {

/// Discrete RFQ size distribution (shares, probability).
struct SizeDistribution {
    std::vector<double> z;
    std::vector<double> w;

    std::size_t size() const { return z.size(); }
    double mean() const;
    void validate() const;

    static SizeDistribution single(double z);
};

/// Bins centred at m * bin_width, m = 1..n_bins, with edges at the midpoints; the
/// Gamma(alpha, rate beta) mass of each bin is renormalised over the covered range.
/// A single bin covers (0, inf).
SizeDistribution discretize_gamma(double alpha, double beta, double bin_width, int n_bins);

}  // namespace rmm::mm
