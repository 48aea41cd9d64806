// AVX2/FMA variants of the emulator inner loops. This translation unit is
// the only one compiled with -mavx2 -mfma; it must not be entered unless
// avx2_supported() returned true.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "ogemm/kernels.hpp"

namespace ogemm::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

// One row of C over a 16-wide column strip, accumulated in registers.
inline void gemm_row_strip16(const double* ai, const double* b, double* ci,
                             size_t k, size_t n, size_t j0) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    for (size_t p = 0; p < k; ++p) {
        const __m256d va = _mm256_set1_pd(ai[p]);
        const double* bp = b + p * n + j0;
        acc0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(bp + 0), acc0);
        acc1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(bp + 4), acc1);
        acc2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(bp + 8), acc2);
        acc3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(bp + 12), acc3);
    }
    _mm256_storeu_pd(ci + j0 + 0, acc0);
    _mm256_storeu_pd(ci + j0 + 4, acc1);
    _mm256_storeu_pd(ci + j0 + 8, acc2);
    _mm256_storeu_pd(ci + j0 + 12, acc3);
}

inline void gemm_row_strip4(const double* ai, const double* b, double* ci,
                            size_t k, size_t n, size_t j0) {
    __m256d acc = _mm256_setzero_pd();
    for (size_t p = 0; p < k; ++p) {
        const __m256d va = _mm256_set1_pd(ai[p]);
        acc = _mm256_fmadd_pd(va, _mm256_loadu_pd(b + p * n + j0), acc);
    }
    _mm256_storeu_pd(ci + j0, acc);
}

void gemm_avx2(const double* a, const double* b, double* c, size_t m,
               size_t k, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        size_t j = 0;
        for (; j + 16 <= n; j += 16) gemm_row_strip16(ai, b, ci, k, n, j);
        for (; j + 4 <= n; j += 4) gemm_row_strip4(ai, b, ci, k, n, j);
        for (; j < n; ++j) {
            double acc = 0.0;
            for (size_t p = 0; p < k; ++p) acc += ai[p] * b[p * n + j];
            ci[j] = acc;
        }
    }
}

double dot_avx2(const double* x, const double* y, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i),
                               _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                               _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i),
                               _mm256_loadu_pd(y + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_avx2(const double* x, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

void nearest_level_avx2(const double* targets, size_t n, const double* levels,
                        const double* midpoints, size_t n_levels,
                        double* out) {
    const size_t n_mid = n_levels - 1;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(targets + i);
        __m256i idx = _mm256_setzero_si256();
        for (size_t m = 0; m < n_mid; ++m) {
            const __m256d mid = _mm256_set1_pd(midpoints[m]);
            // (midpoints[m] < t) contributes all-ones; subtract to count.
            const __m256d lt = _mm256_cmp_pd(mid, t, _CMP_LT_OQ);
            idx = _mm256_sub_epi64(idx, _mm256_castpd_si256(lt));
        }
        alignas(32) int64_t lanes[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), idx);
        out[i + 0] = levels[lanes[0]];
        out[i + 1] = levels[lanes[1]];
        out[i + 2] = levels[lanes[2]];
        out[i + 3] = levels[lanes[3]];
    }
    for (; i < n; ++i) {
        const double t = targets[i];
        size_t idx = 0;
        for (size_t m = 0; m < n_mid; ++m) idx += (midpoints[m] < t) ? 1 : 0;
        out[i] = levels[idx];
    }
}

}  // namespace

extern const Ops kAvx2Ops;
const Ops kAvx2Ops = {gemm_avx2, dot_avx2, sum_avx2, nearest_level_avx2,
                      "avx2"};

}  // namespace ogemm::kernels

#endif  // x86_64
