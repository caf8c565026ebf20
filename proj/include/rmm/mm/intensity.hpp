#pragma once

#include <string>

namespace rmm::mm {

enum class Side { Bid, Ask };

const char* side_name(Side s);

/// Fill-probability intensity Lambda(delta) of an RFQ as a function of the quote shift.
struct IntensityModel {
    enum class Kind { Logistic, Exponential };

    Kind kind = Kind::Logistic;
    // Logistic: lambda_base / (1 + exp(a + b delta)).
    double lambda_base = 0.0;
    double a = 0.0;
    double b = 1.0;
    // Exponential: A exp(-k delta).
    double A = 0.0;
    double k = 1.0;

    static IntensityModel logistic(double lambda_base, double a, double b);
    static IntensityModel exponential(double A, double k);

    double value(double delta) const;
    double d1(double delta) const;
    double d2(double delta) const;
    /// Lambda^{-1}(y); throws RangeError outside the range of Lambda.
    double inverse(double y) const;
    /// Natural width of the transition region (1/b or 1/k).
    double scale() const;
    /// True when the model never generates fills.
    bool is_zero() const;

    void validate() const;
};

struct IntensityCheck {
    bool decreasing = false;
    bool vanishes = false;
    bool ratio_below_two = false;
    double max_ratio = 0.0;  // sup Lambda Lambda'' / Lambda'^2 on the scan
};

/// Scans delta in [lo, hi] at the given spacing.
IntensityCheck check_intensity(const IntensityModel& m, double lo = -1.0, double hi = 1.0,
                               double step = 1e-3);

}  // namespace rmm::mm
