#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmm::simd {

enum class Isa { Scalar, Avx2 };

/// Best instruction set supported by this CPU and build.
Isa detected_isa();

/// Instruction set used by the dispatching entry points. Defaults to detected_isa(),
/// or Scalar when RMM_FORCE_SCALAR is set in the environment.
Isa active_isa();
void set_active_isa(Isa isa);
const char* isa_name(Isa isa);

/// Cubic Hermite table of f on the uniform grid p0 + i h, i = 0..n-1.
struct HermiteTable {
    double p0 = 0.0;
    double h = 1.0;
    double inv_h = 1.0;
    std::vector<double> f;       // f(p_i)
    std::vector<double> hdf;     // h * f'(p_i)

    std::size_t size() const { return f.size(); }
    double lo() const { return p0; }
    double hi() const { return p0 + h * static_cast<double>(f.size() - 1); }
    /// Scalar evaluation; NaN outside [lo, hi).
    double operator()(double p) const;
};

/// out[i] = weight * f((self[i] - other[i]) * inv_z). Points outside the table get NaN;
/// returns their count.
std::size_t hermite_row(const HermiteTable& table, double weight, double inv_z,
                        std::span<const double> self, std::span<const double> other,
                        std::span<double> out);

/// Coefficients of one Euler step for a batch of linear-feedback paths in
/// structure-of-arrays layout (component-major, stride n). Matrices are row-major.
struct LinearStep {
    int d = 0, r = 0, j = 0;
    double dt = 0.0;
    const double* Kx = nullptr;    // r x d
    const double* Ky = nullptr;    // r x r
    const double* c = nullptr;     // r
    const double* A = nullptr;     // r x r
    const double* B = nullptr;     // r x d
    const double* C = nullptr;     // d x d
    const double* R = nullptr;     // d x d
    const double* V = nullptr;     // d x j
};

/// u = Kx x + Ky y + c;  z -= dt (u'Au + u'Bx + x'Cx);  x += dt R x + V dW;  y += dt u.
/// dW holds j rows of n Brownian increments.
void linear_step(const LinearStep& s, std::size_t n, double* x, double* y, double* z,
                 const double* dW);

namespace scalar {
std::size_t hermite_row(const HermiteTable& table, double weight, double inv_z,
                        const double* self, const double* other, double* out, std::size_t n);
void linear_step(const LinearStep& s, std::size_t n, double* x, double* y, double* z,
                 const double* dW);
}  // namespace scalar

namespace avx2 {
std::size_t hermite_row(const HermiteTable& table, double weight, double inv_z,
                        const double* self, const double* other, double* out, std::size_t n);
void linear_step(const LinearStep& s, std::size_t n, double* x, double* y, double* z,
                 const double* dW);
}  // namespace avx2

inline constexpr int kMaxDim = 8;

}  // namespace rmm::simd
