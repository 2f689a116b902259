#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops with a scalar reference and vector variants.
//
// Every variant produces the same bits as the scalar reference: reductions
// use a fixed lane layout (8 float lanes for dot, 4 double lanes for
// sum_squared_diff) combined as ((l0+l4)+(l2+l6))+((l1+l5)+(l3+l7)) or
// (l0+l2)+(l1+l3), followed by a sequential tail; multiplies and adds are
// never fused. Generated corpora therefore do not depend on the host ISA.

namespace tjp::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct Kernels {
  /// sum_i a[i] * b[i]
  float (*dot)(const float* a, const float* b, std::size_t n);
  /// out[i] = sum_k taps[k] * in[i + k] for i < n_out, summed in k order; `in` holds n_out + n_taps - 1 values.
  void (*correlate)(const double* in, std::size_t n_out, const double* taps, std::size_t n_taps, double* out);
  /// out[i] = a[i] * b[i]
  void (*multiply)(const float* a, const float* b, float* out, std::size_t n);
  /// sum_i (double(a[i]) - double(b[i]))^2
  double (*sum_squared_diff)(const float* a, const float* b, std::size_t n);
  /// x[i] = x[i] > lo ? x[i] : lo (NaN becomes lo)
  void (*clamp_min)(float* x, std::size_t n, float lo);
};

bool supported(Isa isa) noexcept;

/// Kernel table for a specific ISA; throws `unsupported` if the host lacks it.
const Kernels& kernels_for(Isa isa);

/// Active table. Chosen on first use: TJP_SIMD=scalar|avx2 if set, else the
/// best supported ISA.
const Kernels& kernels();
Isa active_isa();
void set_active_isa(Isa isa);

namespace detail {
const Kernels& scalar_kernels() noexcept;
const Kernels* avx2_kernels() noexcept;  // nullptr when not compiled in
}  // namespace detail

}  // namespace tjp::simd
