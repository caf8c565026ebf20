#include "rmm/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace rmm::simd::avx2 {

std::size_t hermite_row(const HermiteTable& table, double weight, double inv_z,
                        const double* self, const double* other, double* out, std::size_t n) {
    const __m256d vp0 = _mm256_set1_pd(table.p0);
    const __m256d vinvh = _mm256_set1_pd(table.inv_h);
    const __m256d vinvz = _mm256_set1_pd(inv_z);
    const __m256d vw = _mm256_set1_pd(weight);
    const __m256d vlast = _mm256_set1_pd(static_cast<double>(table.f.size() - 1));
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d nan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
    const double* f = table.f.data();
    const double* hdf = table.hdf.data();
    std::size_t bad = 0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d p = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(self + k), _mm256_loadu_pd(other + k)), vinvz);
        __m256d u = _mm256_mul_pd(_mm256_sub_pd(p, vp0), vinvh);
        __m256d ok = _mm256_and_pd(_mm256_cmp_pd(u, zero, _CMP_GE_OQ), _mm256_cmp_pd(u, vlast, _CMP_LT_OQ));
        const int okmask = _mm256_movemask_pd(ok);
        u = _mm256_blendv_pd(zero, u, ok);
        __m256d fl = _mm256_floor_pd(u);
        __m128i idx = _mm256_cvttpd_epi32(fl);
        __m128i idx1 = _mm_add_epi32(idx, _mm_set1_epi32(1));
        __m256d s = _mm256_sub_pd(u, fl);
        __m256d om = _mm256_sub_pd(one, s);
        __m256d om2 = _mm256_mul_pd(om, om);
        __m256d s2 = _mm256_mul_pd(s, s);
        __m256d h00 = _mm256_mul_pd(_mm256_add_pd(one, _mm256_mul_pd(two, s)), om2);
        __m256d h10 = _mm256_mul_pd(s, om2);
        __m256d h01 = _mm256_mul_pd(s2, _mm256_sub_pd(three, _mm256_mul_pd(two, s)));
        __m256d h11 = _mm256_mul_pd(s2, _mm256_sub_pd(s, one));
        __m256d f0 = _mm256_i32gather_pd(f, idx, 8);
        __m256d f1 = _mm256_i32gather_pd(f, idx1, 8);
        __m256d d0 = _mm256_i32gather_pd(hdf, idx, 8);
        __m256d d1 = _mm256_i32gather_pd(hdf, idx1, 8);
        __m256d v = _mm256_add_pd(_mm256_mul_pd(h00, f0), _mm256_mul_pd(h10, d0));
        v = _mm256_add_pd(v, _mm256_mul_pd(h01, f1));
        v = _mm256_add_pd(v, _mm256_mul_pd(h11, d1));
        v = _mm256_blendv_pd(nan, v, ok);
        _mm256_storeu_pd(out + k, _mm256_mul_pd(vw, v));
        bad += static_cast<std::size_t>(4 - __builtin_popcount(okmask));
    }
    if (k < n) bad += scalar::hermite_row(table, weight, inv_z, self + k, other + k, out + k, n - k);
    return bad;
}

void linear_step(const LinearStep& s, std::size_t n, double* x, double* y, double* z,
                 const double* dW) {
    const int d = s.d, r = s.r, j = s.j;
    const __m256d vdt = _mm256_set1_pd(s.dt);
    __m256d u[kMaxDim], xv[kMaxDim], yv[kMaxDim], xn[kMaxDim];
    std::size_t p = 0;
    for (; p + 4 <= n; p += 4) {
        for (int i = 0; i < d; ++i) xv[i] = _mm256_loadu_pd(x + i * n + p);
        for (int k = 0; k < r; ++k) yv[k] = _mm256_loadu_pd(y + k * n + p);
        for (int k = 0; k < r; ++k) {
            __m256d acc = _mm256_set1_pd(s.c[k]);
            for (int i = 0; i < d; ++i)
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(s.Kx[k * d + i]), xv[i]));
            for (int l = 0; l < r; ++l)
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(s.Ky[k * r + l]), yv[l]));
            u[k] = acc;
        }
        __m256d cost = _mm256_setzero_pd();
        for (int k = 0; k < r; ++k) {
            __m256d row = _mm256_setzero_pd();
            for (int l = 0; l < r; ++l)
                row = _mm256_add_pd(row, _mm256_mul_pd(_mm256_set1_pd(s.A[k * r + l]), u[l]));
            for (int i = 0; i < d; ++i)
                row = _mm256_add_pd(row, _mm256_mul_pd(_mm256_set1_pd(s.B[k * d + i]), xv[i]));
            cost = _mm256_add_pd(cost, _mm256_mul_pd(u[k], row));
        }
        for (int i = 0; i < d; ++i) {
            __m256d row = _mm256_setzero_pd();
            for (int m = 0; m < d; ++m)
                row = _mm256_add_pd(row, _mm256_mul_pd(_mm256_set1_pd(s.C[i * d + m]), xv[m]));
            cost = _mm256_add_pd(cost, _mm256_mul_pd(xv[i], row));
        }
        _mm256_storeu_pd(z + p, _mm256_sub_pd(_mm256_loadu_pd(z + p), _mm256_mul_pd(vdt, cost)));
        for (int i = 0; i < d; ++i) {
            __m256d drift = _mm256_setzero_pd();
            for (int m = 0; m < d; ++m)
                drift = _mm256_add_pd(drift, _mm256_mul_pd(_mm256_set1_pd(s.R[i * d + m]), xv[m]));
            __m256d noise = _mm256_setzero_pd();
            for (int m = 0; m < j; ++m)
                noise = _mm256_add_pd(noise, _mm256_mul_pd(_mm256_set1_pd(s.V[i * j + m]),
                                                           _mm256_loadu_pd(dW + m * n + p)));
            xn[i] = _mm256_add_pd(_mm256_add_pd(xv[i], _mm256_mul_pd(vdt, drift)), noise);
        }
        for (int i = 0; i < d; ++i) _mm256_storeu_pd(x + i * n + p, xn[i]);
        for (int k = 0; k < r; ++k)
            _mm256_storeu_pd(y + k * n + p, _mm256_add_pd(yv[k], _mm256_mul_pd(vdt, u[k])));
    }
    if (p < n) {
        // Tail paths: reuse the scalar kernel on a strided view.
        const std::size_t m = n - p;
        double tx[kMaxDim * 4], ty[kMaxDim * 4], tw[kMaxDim * 4];
        for (int i = 0; i < d; ++i)
            for (std::size_t q = 0; q < m; ++q) tx[i * m + q] = x[i * n + p + q];
        for (int k = 0; k < r; ++k)
            for (std::size_t q = 0; q < m; ++q) ty[k * m + q] = y[k * n + p + q];
        for (int i = 0; i < j; ++i)
            for (std::size_t q = 0; q < m; ++q) tw[i * m + q] = dW[i * n + p + q];
        scalar::linear_step(s, m, tx, ty, z + p, tw);
        for (int i = 0; i < d; ++i)
            for (std::size_t q = 0; q < m; ++q) x[i * n + p + q] = tx[i * m + q];
        for (int k = 0; k < r; ++k)
            for (std::size_t q = 0; q < m; ++q) y[k * n + p + q] = ty[k * m + q];
    }
}

}  // namespace rmm::simd::avx2
