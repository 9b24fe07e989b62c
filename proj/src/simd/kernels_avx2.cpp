// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -mfma (see CMakeLists). Nothing here may run before
// the dispatcher has confirmed AVX2 support.

#include "gesplat/simd.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <cmath>
#include <cstdint>
#include <immintrin.h>

namespace gesplat::simd {
namespace {

// exp() on 4 doubles, Cephes-style: 2^k * expPade(r) with x = k ln2 + r.
// Accurate to a few ulp over the clamped range, which the equivalence tests
// pin against std::exp.
inline __m256d exp4(__m256d x) {
    const __m256d max_x = _mm256_set1_pd(709.436);
    const __m256d min_x = _mm256_set1_pd(-708.396);
    x = _mm256_min_pd(_mm256_max_pd(x, min_x), max_x);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d half = _mm256_set1_pd(0.5);
    __m256d k = _mm256_floor_pd(_mm256_fmadd_pd(x, log2e, half));

    // Two-part ln2 keeps the reduced argument accurate.
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
    __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
    r = _mm256_fnmadd_pd(k, ln2_lo, r);

    const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
    const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
    const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
    const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
    const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
    const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
    const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d p = _mm256_fmadd_pd(p0, rr, p1);
    p = _mm256_fmadd_pd(p, rr, p2);
    p = _mm256_mul_pd(p, r);
    __m256d q = _mm256_fmadd_pd(q0, rr, q1);
    q = _mm256_fmadd_pd(q, rr, q2);
    q = _mm256_fmadd_pd(q, rr, q3);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(two, e, one);

    // Scale by 2^k via direct exponent construction.
    const __m128i ki = _mm256_cvtpd_epi32(k);
    const __m256i ki64 = _mm256_cvtepi32_epi64(ki);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(ki64, bias), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));
}

void exp_batch_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
    }
    if (i < n) {
        alignas(32) double buf[4] = {0, 0, 0, 0};
        for (std::size_t j = i; j < n; ++j) buf[j - i] = x[j];
        alignas(32) double res[4];
        _mm256_store_pd(res, exp4(_mm256_load_pd(buf)));
        for (std::size_t j = i; j < n; ++j) out[j] = res[j - i];
    }
}

void splat_alpha_row_avx2(double mean_x, double mean_y, double a, double b,
                          double c, double opacity, int px0, int py, int n,
                          double* out) {
    const double dy = (py + 0.5) - mean_y;
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vbdy = _mm256_set1_pd(b * dy);
    const __m256d vcy2 = _mm256_set1_pd(c * dy * dy);
    const __m256d vneg_half = _mm256_set1_pd(-0.5);
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vop = _mm256_set1_pd(opacity);
    const __m256d base_x = _mm256_set1_pd(px0 + 0.5 - mean_x);
    const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx =
            _mm256_add_pd(base_x, _mm256_add_pd(lane, _mm256_set1_pd(double(i))));
        __m256d quad = _mm256_fmadd_pd(_mm256_mul_pd(va, dx), dx, vcy2);
        __m256d power = _mm256_fnmadd_pd(vbdy, dx, _mm256_mul_pd(vneg_half, quad));
        power = _mm256_min_pd(power, vzero);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vop, exp4(power)));
    }
    for (; i < n; ++i) {
        const double dx = (px0 + i + 0.5) - mean_x;
        double power = -0.5 * (a * dx * dx + c * dy * dy) - (b * dy) * dx;
        if (power > 0.0) power = 0.0;
        out[i] = opacity * std::exp(power);
    }
}

const KernelTable avx2_kernels{exp_batch_avx2, splat_alpha_row_avx2};

} // namespace

namespace detail {
const KernelTable* avx2_table() { return &avx2_kernels; }
} // namespace detail

} // namespace gesplat::simd

#else

namespace gesplat::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
} // namespace gesplat::simd::detail

#endif
