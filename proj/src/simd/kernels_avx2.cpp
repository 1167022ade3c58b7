#include "invlab/simd/kernels.hpp"

// AVX2+FMA variants. This translation unit is compiled without -mavx2; each
// function carries a target attribute so the binary stays runnable on plain
// x86-64, with the dispatcher checking CPU support at startup.

#if defined(__x86_64__) || defined(_M_X64)
#define INVLAB_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define INVLAB_HAVE_AVX2_TU 0
#endif

#include <cmath>

namespace invlab::simd::detail {

#if INVLAB_HAVE_AVX2_TU

#define AVX2_FN __attribute__((target("avx2,fma")))

namespace {

AVX2_FN inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

AVX2_FN double v_dot(const double* a, const double* b, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    }
    for (; i + 4 <= n; i += 4)
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

AVX2_FN double v_wdot(const double* w, const double* a, const double* b, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), ab, s0);
    }
    double s = hsum(s0);
    for (; i < n; ++i) s += w[i] * a[i] * b[i];
    return s;
}

AVX2_FN double v_sumsq(const double* a, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d x0 = _mm256_loadu_pd(a + i), x1 = _mm256_loadu_pd(a + i + 4);
        s0 = _mm256_fmadd_pd(x0, x0, s0);
        s1 = _mm256_fmadd_pd(x1, x1, s1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d x0 = _mm256_loadu_pd(a + i);
        s0 = _mm256_fmadd_pd(x0, x0, s0);
    }
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += a[i] * a[i];
    return s;
}

AVX2_FN double v_wsumsq(const double* w, const double* a, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(a + i);
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(x, x), s0);
    }
    double s = hsum(s0);
    for (; i < n; ++i) s += w[i] * a[i] * a[i];
    return s;
}

AVX2_FN double v_max_abs(const double* a, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_max_pd(m, _mm256_and_pd(mask, _mm256_loadu_pd(a + i)));
    double out[4];
    _mm256_storeu_pd(out, m);
    double r = std::max(std::max(out[0], out[1]), std::max(out[2], out[3]));
    for (; i < n; ++i) r = std::max(r, std::fabs(a[i]));
    return r;
}

AVX2_FN void v_axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

AVX2_FN void v_xpby(const double* x, double beta, double* y, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

AVX2_FN void v_scale(double alpha, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

AVX2_FN void v_triad(double* z, const double* x, double alpha, const double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) z[i] = x[i] + alpha * y[i];
}

AVX2_FN void v_mul(double* z, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

AVX2_FN void v_fmadd(double* z, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                                                _mm256_loadu_pd(z + i)));
    for (; i < n; ++i) z[i] += x[i] * y[i];
}

} // namespace

bool fill_avx2_table(Table& t) {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return false;
    t = Table{v_dot, v_wdot, v_sumsq, v_wsumsq, v_max_abs,
              v_axpy, v_xpby, v_scale, v_triad, v_mul, v_fmadd};
    return true;
}

#else

bool fill_avx2_table(Table&) { return false; }

#endif

} // namespace invlab::simd::detail
