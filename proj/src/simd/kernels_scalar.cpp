#include "tjp/simd.hpp"

namespace tjp::simd::detail {

namespace {

float dot_scalar(const float* a, const float* b, std::size_t n) {
  float lane[8] = {};
  const std::size_t blocked = n - n % 8;
  for (std::size_t i = 0; i < blocked; i += 8) {
    for (std::size_t l = 0; l < 8; ++l) lane[l] = lane[l] + a[i + l] * b[i + l];
  }
  float sum = ((lane[0] + lane[4]) + (lane[2] + lane[6])) + ((lane[1] + lane[5]) + (lane[3] + lane[7]));
  for (std::size_t i = blocked; i < n; ++i) sum = sum + a[i] * b[i];
  return sum;
}

void correlate_scalar(const double* in, std::size_t n_out, const double* taps, std::size_t n_taps, double* out) {
  for (std::size_t i = 0; i < n_out; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_taps; ++k) acc = acc + taps[k] * in[i + k];
    out[i] = acc;
  }
}

void multiply_scalar(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_squared_diff_scalar(const float* a, const float* b, std::size_t n) {
  double lane[4] = {};
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double d = static_cast<double>(a[i + l]) - static_cast<double>(b[i + l]);
      lane[l] = lane[l] + d * d;
    }
  }
  double sum = (lane[0] + lane[2]) + (lane[1] + lane[3]);
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum = sum + d * d;
  }
  return sum;
}

void clamp_min_scalar(float* x, std::size_t n, float lo) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > lo ? x[i] : lo;
}

}  // namespace

const Kernels& scalar_kernels() noexcept {
  static const Kernels k{dot_scalar, correlate_scalar, multiply_scalar, sum_squared_diff_scalar, clamp_min_scalar};
  return k;
}

}  // namespace tjp::simd::detail
