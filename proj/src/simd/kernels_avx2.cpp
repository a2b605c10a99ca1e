// AVX2/FMA variants. This file is compiled with -mavx2 -mfma and must only be
// reached through the dispatch table after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "csl/simd/kernels.hpp"

namespace csl::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Lane-wise round-to-nearest double -> int64 for |n| < 2^51.
inline __m256i to_int64(__m256d n) {
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 2^52 + 2^51
    return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)), _mm256_castpd_si256(magic));
}

// exp(x) for x <= 0 (Cephes rational form). Lanes below -708 return 0.
inline __m256d exp_nonpositive(__m256d x) {
    const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d px = _mm256_fmadd_pd(_mm256_set1_pd(1.26177193074810590878e-4), rr,
                                 _mm256_set1_pd(3.02994407707441961300e-2));
    px = _mm256_fmadd_pd(px, rr, _mm256_set1_pd(9.99999999999999999910e-1));
    px = _mm256_mul_pd(px, r);
    __m256d qx = _mm256_fmadd_pd(_mm256_set1_pd(3.00198505138664455042e-6), rr,
                                 _mm256_set1_pd(2.52448340349684104192e-3));
    qx = _mm256_fmadd_pd(qx, rr, _mm256_set1_pd(2.27265548208155028766e-1));
    qx = _mm256_fmadd_pd(qx, rr, _mm256_set1_pd(2.00000000000000000009e0));
    __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(to_int64(n), _mm256_set1_epi64x(1023)), 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
    return _mm256_andnot_pd(underflow, e);
}

// Beyond this the three-term reduction loses digits; those lanes go scalar.
constexpr double kSinReduceLimit = 1e5;

// sin(b)/b for 1e-4 <= b <= kSinReduceLimit, series below 1e-4.
inline __m256d sinc_reduced(__m256d b) {
    const __m256d j = _mm256_round_pd(_mm256_mul_pd(b, _mm256_set1_pd(0.63661977236758134308)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(j, _mm256_set1_pd(1.57079632673412561417e+00), b);
    r = _mm256_fnmadd_pd(j, _mm256_set1_pd(6.07710050630396597660e-11), r);
    r = _mm256_fnmadd_pd(j, _mm256_set1_pd(2.02226624871116645580e-21), r);
    const __m256d z = _mm256_mul_pd(r, r);

    __m256d sp = _mm256_fmadd_pd(_mm256_set1_pd(1.58969099521155010221e-10), z,
                                 _mm256_set1_pd(-2.50507602534068634195e-08));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(2.75573137070700676789e-06));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.98412698298579493134e-04));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(8.33333333332248946124e-03));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.66666666666666324348e-01));
    const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(sp, z), r, r);

    __m256d cp = _mm256_fmadd_pd(_mm256_set1_pd(-1.13596475577881948265e-11), z,
                                 _mm256_set1_pd(2.08757232129817482790e-09));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-2.75573143513906633035e-07));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(2.48015872894767294178e-05));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-1.38888888888741095749e-03));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(4.16666666666666019037e-02));
    const __m256d cos_r =
        _mm256_fmadd_pd(_mm256_mul_pd(z, z), cp, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

    // Quadrant j mod 4: sin, cos, -sin, -cos.
    const __m256i q = _mm256_and_si256(to_int64(j), _mm256_set1_epi64x(3));
    const __m256d use_cos = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(1)),
                                                                   _mm256_set1_epi64x(1)));
    const __m256d negate = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(2)),
                                                                  _mm256_set1_epi64x(2)));
    __m256d s = _mm256_blendv_pd(sin_r, cos_r, use_cos);
    s = _mm256_xor_pd(s, _mm256_and_pd(negate, _mm256_set1_pd(-0.0)));
    const __m256d direct = _mm256_div_pd(s, b);

    const __m256d b2 = _mm256_mul_pd(b, b);
    __m256d series = _mm256_fmadd_pd(b2, _mm256_set1_pd(1.0 / 120.0), _mm256_set1_pd(-1.0 / 6.0));
    series = _mm256_fmadd_pd(series, b2, _mm256_set1_pd(1.0));
    const __m256d small = _mm256_cmp_pd(b, _mm256_set1_pd(1e-4), _CMP_LT_OQ);
    return _mm256_blendv_pd(direct, series, small);
}

// Full-range sinc: lanes beyond the reduction limit use std::sin, but only
// when the caller's weight for that lane is non-zero.
inline __m256d sinc_masked(__m256d b, __m256d weight) {
    __m256d s = sinc_reduced(b);
    const __m256d big = _mm256_and_pd(_mm256_cmp_pd(b, _mm256_set1_pd(kSinReduceLimit), _CMP_GT_OQ),
                                      _mm256_cmp_pd(weight, _mm256_setzero_pd(), _CMP_NEQ_UQ));
    const int mask = _mm256_movemask_pd(big);
    if (mask != 0) {
        alignas(32) double lanes_b[4];
        alignas(32) double lanes_s[4];
        _mm256_store_pd(lanes_b, b);
        _mm256_store_pd(lanes_s, s);
        for (int l = 0; l < 4; ++l) {
            if (mask & (1 << l)) lanes_s[l] = std::sin(lanes_b[l]) / lanes_b[l];
        }
        s = _mm256_load_pd(lanes_s);
    }
    return s;
}

inline __m256d horner(std::span<const double> coeffs, __m256d x) {
    __m256d acc = _mm256_setzero_pd();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(*it));
    }
    return acc;
}

}  // namespace

void exp4(const double* in, double* out) { _mm256_storeu_pd(out, exp_nonpositive(_mm256_loadu_pd(in))); }

void sinc4(const double* in, double* out) {
    _mm256_storeu_pd(out, sinc_masked(_mm256_loadu_pd(in), _mm256_set1_pd(1.0)));
}

double pair_sum(const ChargeCloud& cloud, const PairKernelParams& params) {
    const std::size_t n = cloud.size();
    const __m256d inv4 = _mm256_set1_pd(params.inv_four_rc2);
    const __m256d k = _mm256_set1_pd(params.wavenumber);
    const __m256d two_thirds = _mm256_set1_pd(2.0 / 3.0);
    const __m256d one = _mm256_set1_pd(1.0);

    double diagonal = 0.0;
    double off_diagonal = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double qi = cloud.charge[i];
        diagonal += qi * qi;
        const __m256d xi = _mm256_set1_pd(cloud.x[i]);
        const __m256d yi = _mm256_set1_pd(cloud.y[i]);
        const __m256d zi = _mm256_set1_pd(cloud.z[i]);

        __m256d row = _mm256_setzero_pd();
        std::size_t j = i + 1;
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(&cloud.x[j]));
            const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(&cloud.y[j]));
            const __m256d dz = _mm256_sub_pd(zi, _mm256_loadu_pd(&cloud.z[j]));
            const __m256d d2 = _mm256_fmadd_pd(dz, dz, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx)));
            const __m256d u = _mm256_mul_pd(d2, inv4);
            const __m256d g = exp_nonpositive(_mm256_sub_pd(_mm256_setzero_pd(), u));
            const __m256d shape = _mm256_mul_pd(g, _mm256_fnmadd_pd(two_thirds, u, one));
            const __m256d sc = sinc_masked(_mm256_mul_pd(k, _mm256_sqrt_pd(d2)), shape);
            row = _mm256_fmadd_pd(_mm256_loadu_pd(&cloud.charge[j]), _mm256_mul_pd(shape, sc), row);
        }
        double row_sum = hsum(row);
        for (; j < n; ++j) {
            const double dx = cloud.x[i] - cloud.x[j];
            const double dy = cloud.y[i] - cloud.y[j];
            const double dz = cloud.z[i] - cloud.z[j];
            row_sum += cloud.charge[j] * scalar::pair_kernel(dx * dx + dy * dy + dz * dz, params);
        }
        off_diagonal += qi * row_sum;
    }
    return diagonal + 2.0 * off_diagonal;
}

std::size_t clamped_polynomial(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) {
    std::size_t clamped = 0;
    std::size_t i = 0;
    const __m256d zero = _mm256_setzero_pd();
    for (; i + 4 <= x.size(); i += 4) {
        const __m256d p = horner(coeffs, _mm256_loadu_pd(&x[i]));
        clamped += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(p, zero, _CMP_LT_OQ))));
        _mm256_storeu_pd(&out[i], _mm256_max_pd(p, zero));
    }
    if (i < x.size()) {
        clamped += scalar::clamped_polynomial(coeffs, x.subspan(i), std::span<double>(out).subspan(i));
    }
    return clamped;
}

std::size_t folded_density(std::span<const double> coeffs, double weight, std::span<const double> energies,
                           std::span<double> acc) {
    std::size_t clamped = 0;
    std::size_t i = 0;
    const __m256d zero = _mm256_setzero_pd();
    const __m256d w = _mm256_set1_pd(weight);
    for (; i + 4 <= energies.size(); i += 4) {
        const __m256d e = _mm256_loadu_pd(&energies[i]);
        const __m256d p = horner(coeffs, e);
        clamped += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(p, zero, _CMP_LT_OQ))));
        const __m256d term = _mm256_div_pd(_mm256_mul_pd(w, _mm256_max_pd(p, zero)), e);
        _mm256_storeu_pd(&acc[i], _mm256_add_pd(_mm256_loadu_pd(&acc[i]), term));
    }
    if (i < energies.size()) {
        clamped += scalar::folded_density(coeffs, weight, energies.subspan(i), acc.subspan(i));
    }
    return clamped;
}

}  // namespace csl::simd::avx2
