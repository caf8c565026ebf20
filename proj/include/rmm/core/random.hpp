#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rmm {

/// Counter-based Philox4x32-10. Streams are addressed by (seed, counter), so paths
/// generated in any order or on any thread see the same numbers.
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox(std::uint64_t seed)
        : k0_(static_cast<std::uint32_t>(seed)), k1_(static_cast<std::uint32_t>(seed >> 32)) {}

    Block operator()(std::uint64_t a, std::uint64_t b) const {
        Block c{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        std::uint32_t k0 = k0_, k1 = k1_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0, static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1, static_cast<std::uint32_t>(p0)};
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return c;
    }

    /// Uniform in (0, 1) with 53 random bits.
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (lo >> 11);
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Two independent standard normals for the given counter (Box-Muller).
    std::array<double, 2> normal_pair(std::uint64_t a, std::uint64_t b) const {
        const Block x = (*this)(a, b);
        const double u1 = to_unit(x[0], x[1]);
        const double u2 = to_unit(x[2], x[3]);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }

    double uniform(std::uint64_t a, std::uint64_t b) const {
        const Block x = (*this)(a, b);
        return to_unit(x[0], x[1]);
    }

private:
    std::uint32_t k0_, k1_;
};

/// Sequential stream on top of Philox for one logical path.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t stream) : gen_(seed), stream_(stream) {}

    double uniform() { return gen_.uniform(stream_, counter_++); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        auto z = gen_.normal_pair(stream_, counter_++);
        spare_ = z[1];
        has_spare_ = true;
        return z[0];
    }

    /// Poisson variate (multiplication method, large means split into pieces).
    std::uint64_t poisson(double mean) {
        if (!(mean > 0)) return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            double prod = uniform();
            std::uint64_t k = 0;
            while (prod > limit) {
                prod *= uniform();
                ++k;
            }
            return k;
        }
        std::uint64_t total = 0;
        double left = mean;
        while (left > 0) {
            const double piece = std::min(left, 20.0);
            total += poisson(piece);
            left -= piece;
        }
        return total;
    }

private:
    Philox gen_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rmm
