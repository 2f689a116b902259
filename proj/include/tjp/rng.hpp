#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace tjp {

/// Identifies a random stream: the same lineage always yields the same draws.
struct Lineage {
  std::uint64_t master_seed = 0;
  std::string label;
  std::uint64_t index = 0;

  friend bool operator==(const Lineage&, const Lineage&) = default;
};

inline constexpr std::size_t kMaxLabelBytes = 32;

std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// xoshiro256++ stream seeded from a (master_seed, label, index) lineage.
///
/// The 64-bit seed word is splitmix64_finalize(master ^ fnv1a64(label) ^
/// index * 0x9E3779B97F4A7C15), re-finalized once if it comes out zero. The
/// four xoshiro words are the first four outputs of a SplitMix64 sequence
/// started at the seed word. Uniform doubles use the top 53 bits.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label, std::uint64_t index);

  /// Child stream with label "<parent label>.<sub>" and the parent's seed and index.
  RngStream fork(std::string_view sub) const;

  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1).
  double uniform() noexcept;
  /// Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi) noexcept;
  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  double gaussian(double mu, double sigma) noexcept;
  std::uint64_t poisson(double lambda);

  const Lineage& lineage() const noexcept { return lineage_; }
  std::uint64_t seed_word() const noexcept { return seed_; }

 private:
  Lineage lineage_;
  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

RngStream rng_substream(std::uint64_t master_seed, std::string_view label, std::uint64_t index);

/// Box-Muller; the second variate of each pair is cached.
double draw_gaussian(RngStream& rng, double mu, double sigma);

/// Knuth multiplication for lambda <= 30, rounded clamped normal above.
std::uint64_t draw_poisson(RngStream& rng, double lambda);

}  // namespace tjp
