#include "rmm/core/errors.hpp"
#include "rmm/simd/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace rmm::simd {

namespace {

Isa initial_isa() {
    if (std::getenv("RMM_FORCE_SCALAR") != nullptr) return Isa::Scalar;
    return detected_isa();
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

Isa detected_isa() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

Isa active_isa() {
    return active().load(std::memory_order_relaxed);
}

void set_active_isa(Isa isa) {
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2)
        throw ConfigError("AVX2 requested but not supported by this CPU");
    active().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

double HermiteTable::operator()(double p) const {
    const double zero = 0.0;
    double out = 0.0;
    scalar::hermite_row(*this, 1.0, 1.0, &p, &zero, &out, 1);
    return out;
}

std::size_t hermite_row(const HermiteTable& table, double weight, double inv_z,
                        std::span<const double> self, std::span<const double> other,
                        std::span<double> out) {
    if (self.size() != other.size() || self.size() != out.size())
        throw DimensionError("hermite_row: span sizes differ");
    if (table.size() < 2) throw ConfigError("hermite_row: table needs at least two points");
    if (active_isa() == Isa::Avx2)
        return avx2::hermite_row(table, weight, inv_z, self.data(), other.data(), out.data(), self.size());
    return scalar::hermite_row(table, weight, inv_z, self.data(), other.data(), out.data(), self.size());
}

void linear_step(const LinearStep& s, std::size_t n, double* x, double* y, double* z,
                 const double* dW) {
    if (s.d > kMaxDim || s.r > kMaxDim || s.j > kMaxDim || s.d <= 0 || s.r <= 0 || s.j <= 0)
        throw DimensionError("linear_step: dimensions must lie in [1, 8]");
    if (active_isa() == Isa::Avx2) return avx2::linear_step(s, n, x, y, z, dW);
    scalar::linear_step(s, n, x, y, z, dW);
}

}  // namespace rmm::simd
