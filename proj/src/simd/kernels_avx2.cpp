// SPDX-License-Identifier: Apache-2.0
// Compiled without global -mavx2; each function carries a target attribute
// so the rest of the library stays baseline x86-64.
#include "qelm/simd/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define QELM_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace qelm::simd {

#ifdef QELM_HAVE_AVX2_KERNELS
namespace {

#define QELM_AVX2 __attribute__((target("avx2,fma")))

// (re, im) pairs -> (im, -re) pairs, i.e. -i * z for two packed complexes.
QELM_AVX2 inline __m256d mul_minus_i(__m256d v) {
    const __m256d sw = _mm256_permute_pd(v, 0b0101);
    return _mm256_mul_pd(sw, _mm256_setr_pd(1.0, -1.0, 1.0, -1.0));
}

QELM_AVX2 void rotate_x(cplx* amps, std::size_t n, std::size_t stride, double c, double s) {
    double* p = reinterpret_cast<double*>(amps);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    if (stride == 1) {
        // one register holds the pair [a0, a1]
        const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
        for (std::size_t i = 0; i < n; i += 2) {
            const __m256d v = _mm256_loadu_pd(p + 2 * i);
            const __m256d x = _mm256_mul_pd(_mm256_permute4x64_pd(v, 0b00011011), sign);
            _mm256_storeu_pd(p + 2 * i, _mm256_fmadd_pd(vs, x, _mm256_mul_pd(vc, v)));
        }
        return;
    }
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; i += 2) {
            const __m256d a0 = _mm256_loadu_pd(p + 2 * i);
            const __m256d a1 = _mm256_loadu_pd(p + 2 * (i + stride));
            const __m256d r0 = _mm256_fmadd_pd(vs, mul_minus_i(a1), _mm256_mul_pd(vc, a0));
            const __m256d r1 = _mm256_fmadd_pd(vs, mul_minus_i(a0), _mm256_mul_pd(vc, a1));
            _mm256_storeu_pd(p + 2 * i, r0);
            _mm256_storeu_pd(p + 2 * (i + stride), r1);
        }
    }
}

QELM_AVX2 void rotate_y(cplx* amps, std::size_t n, std::size_t stride, double c, double s) {
    double* p = reinterpret_cast<double*>(amps);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    if (stride == 1) {
        const __m256d sign = _mm256_setr_pd(-1.0, -1.0, 1.0, 1.0);
        for (std::size_t i = 0; i < n; i += 2) {
            const __m256d v = _mm256_loadu_pd(p + 2 * i);
            const __m256d x = _mm256_mul_pd(_mm256_permute4x64_pd(v, 0b01001110), sign);
            _mm256_storeu_pd(p + 2 * i, _mm256_fmadd_pd(vs, x, _mm256_mul_pd(vc, v)));
        }
        return;
    }
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; i += 2) {
            const __m256d a0 = _mm256_loadu_pd(p + 2 * i);
            const __m256d a1 = _mm256_loadu_pd(p + 2 * (i + stride));
            const __m256d r0 = _mm256_fnmadd_pd(vs, a1, _mm256_mul_pd(vc, a0));
            const __m256d r1 = _mm256_fmadd_pd(vs, a0, _mm256_mul_pd(vc, a1));
            _mm256_storeu_pd(p + 2 * i, r0);
            _mm256_storeu_pd(p + 2 * (i + stride), r1);
        }
    }
}

QELM_AVX2 void probabilities(const cplx* amps, double* out, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(amps);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(p + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0b11011000));
    }
    for (; i < n; ++i) out[i] = amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
}

QELM_AVX2 double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double sum = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

QELM_AVX2 void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

#undef QELM_AVX2

constexpr Kernels kTable{Isa::avx2, rotate_x, rotate_y, probabilities, dot, axpy};

} // namespace

const Kernels* avx2_kernels() noexcept { return &kTable; }
#else
const Kernels* avx2_kernels() noexcept { return nullptr; }
#endif

} // namespace qelm::simd
