#include <atomic>
#include <cstdlib>
#include <string>

#include "tjp/error.hpp"
#include "tjp/simd.hpp"

namespace tjp::simd {

namespace {

bool host_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("TJP_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && supported(Isa::avx2)) return Isa::avx2;
  }
  return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<const Kernels*>& active_table() {
  static std::atomic<const Kernels*> table{&kernels_for(initial_isa())};
  return table;
}

std::atomic<Isa>& active_tag() {
  static std::atomic<Isa> tag{initial_isa()};
  return tag;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return detail::avx2_kernels() != nullptr && host_has_avx2();
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!supported(isa)) fail(ErrorKind::unsupported, "SIMD variant not available: " + std::string(to_string(isa)));
  return isa == Isa::avx2 ? *detail::avx2_kernels() : detail::scalar_kernels();
}

const Kernels& kernels() { return *active_table().load(std::memory_order_acquire); }

Isa active_isa() {
  active_table();
  return active_tag().load();
}

void set_active_isa(Isa isa) {
  const Kernels& k = kernels_for(isa);
  active_tag().store(isa);
  active_table().store(&k, std::memory_order_release);
}

}  // namespace tjp::simd
