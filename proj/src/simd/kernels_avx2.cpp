// Compiled with -mavx2 (no -mfma: products and sums must round separately).
#include "tjp/simd.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace tjp::simd::detail {

namespace {

float dot_avx2(const float* a, const float* b, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  const std::size_t blocked = n - n % 8;
  for (std::size_t i = 0; i < blocked; i += 8) {
    const __m256 prod = _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
    acc = _mm256_add_ps(acc, prod);
  }
  // (l0+l4, l1+l5, l2+l6, l3+l7)
  const __m128 quad = _mm_add_ps(_mm256_castps256_ps128(acc), _mm256_extractf128_ps(acc, 1));
  // (q0+q2, q1+q3)
  const __m128 pair = _mm_add_ps(quad, _mm_movehl_ps(quad, quad));
  float sum = _mm_cvtss_f32(_mm_add_ss(pair, _mm_shuffle_ps(pair, pair, 0x55)));
  for (std::size_t i = blocked; i < n; ++i) sum = sum + a[i] * b[i];
  return sum;
}

void correlate_avx2(const double* in, std::size_t n_out, const double* taps, std::size_t n_taps, double* out) {
  const std::size_t blocked = n_out - n_out % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_taps; ++k) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps[k]), _mm256_loadu_pd(in + i + k)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (std::size_t i = blocked; i < n_out; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_taps; ++k) acc = acc + taps[k] * in[i + k];
    out[i] = acc;
  }
}

void multiply_avx2(const float* a, const float* b, float* out, std::size_t n) {
  const std::size_t blocked = n - n % 8;
  for (std::size_t i = 0; i < blocked; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  }
  for (std::size_t i = blocked; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_squared_diff_avx2(const float* a, const float* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_cvtps_pd(_mm_loadu_ps(a + i)), _mm256_cvtps_pd(_mm_loadu_ps(b + i)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  // (l0+l2, l1+l3)
  const __m128d pair = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double sum = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum = sum + d * d;
  }
  return sum;
}

void clamp_min_avx2(float* x, std::size_t n, float lo) {
  const __m256 vlo = _mm256_set1_ps(lo);
  const std::size_t blocked = n - n % 8;
  // MAXPS returns the second operand unless the first is strictly greater.
  for (std::size_t i = 0; i < blocked; i += 8) _mm256_storeu_ps(x + i, _mm256_max_ps(_mm256_loadu_ps(x + i), vlo));
  for (std::size_t i = blocked; i < n; ++i) x[i] = x[i] > lo ? x[i] : lo;
}

}  // namespace

const Kernels* avx2_kernels() noexcept {
  static const Kernels k{dot_avx2, correlate_avx2, multiply_avx2, sum_squared_diff_avx2, clamp_min_avx2};
  return &k;
}

}  // namespace tjp::simd::detail

#else

namespace tjp::simd::detail {
const Kernels* avx2_kernels() noexcept { return nullptr; }
}  // namespace tjp::simd::detail

#endif
