#include "rmm/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace rmm::simd::scalar {

namespace {

inline double hermite_eval(const HermiteTable& t, double p, bool& ok) {
    const double u = (p - t.p0) * t.inv_h;
    const double last = static_cast<double>(t.f.size() - 1);
    if (!(u >= 0.0 && u < last)) {
        ok = false;
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double fl = std::floor(u);
    const auto i = static_cast<std::size_t>(fl);
    const double s = u - fl;
    const double om = 1.0 - s;
    const double om2 = om * om;
    const double s2 = s * s;
    const double h00 = (1.0 + 2.0 * s) * om2;
    const double h10 = s * om2;
    const double h01 = s2 * (3.0 - 2.0 * s);
    const double h11 = s2 * (s - 1.0);
    ok = true;
    return ((h00 * t.f[i] + h10 * t.hdf[i]) + h01 * t.f[i + 1]) + h11 * t.hdf[i + 1];
}

}  // namespace

std::size_t hermite_row(const HermiteTable& table, double weight, double inv_z,
                        const double* self, const double* other, double* out, std::size_t n) {
    std::size_t bad = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = (self[k] - other[k]) * inv_z;
        bool ok = true;
        const double v = hermite_eval(table, p, ok);
        if (!ok) ++bad;
        out[k] = weight * v;
    }
    return bad;
}

void linear_step(const LinearStep& s, std::size_t n, double* x, double* y, double* z,
                 const double* dW) {
    const int d = s.d, r = s.r, j = s.j;
    double u[kMaxDim], xn[kMaxDim], xv[kMaxDim], yv[kMaxDim];
    for (std::size_t p = 0; p < n; ++p) {
        for (int i = 0; i < d; ++i) xv[i] = x[i * n + p];
        for (int k = 0; k < r; ++k) yv[k] = y[k * n + p];
        for (int k = 0; k < r; ++k) {
            double acc = s.c[k];
            for (int i = 0; i < d; ++i) acc = acc + s.Kx[k * d + i] * xv[i];
            for (int l = 0; l < r; ++l) acc = acc + s.Ky[k * r + l] * yv[l];
            u[k] = acc;
        }
        double cost = 0.0;
        for (int k = 0; k < r; ++k) {
            double row = 0.0;
            for (int l = 0; l < r; ++l) row = row + s.A[k * r + l] * u[l];
            for (int i = 0; i < d; ++i) row = row + s.B[k * d + i] * xv[i];
            cost = cost + u[k] * row;
        }
        for (int i = 0; i < d; ++i) {
            double row = 0.0;
            for (int m = 0; m < d; ++m) row = row + s.C[i * d + m] * xv[m];
            cost = cost + xv[i] * row;
        }
        z[p] = z[p] - s.dt * cost;
        for (int i = 0; i < d; ++i) {
            double drift = 0.0;
            for (int m = 0; m < d; ++m) drift = drift + s.R[i * d + m] * xv[m];
            double noise = 0.0;
            for (int m = 0; m < j; ++m) noise = noise + s.V[i * j + m] * dW[m * n + p];
            xn[i] = (xv[i] + s.dt * drift) + noise;
        }
        for (int i = 0; i < d; ++i) x[i * n + p] = xn[i];
        for (int k = 0; k < r; ++k) y[k * n + p] = yv[k] + s.dt * u[k];
    }
}

}  // namespace rmm::simd::scalar
