#include "tjp/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "tjp/error.hpp"

namespace tjp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void check_label(std::string_view label) {
  if (label.size() > kMaxLabelBytes) {
    fail(ErrorKind::configuration, "rng label longer than 32 bytes: " + std::string(label));
  }
  for (unsigned char c : label) {
    if (c > 0x7F) fail(ErrorKind::configuration, "rng label must be ASCII");
  }
}

}  // namespace

std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view label, std::uint64_t index)
    : lineage_{master_seed, std::string(label), index} {
  check_label(label);
  seed_ = splitmix64_finalize(master_seed ^ fnv1a64(label) ^ (index * kGolden));
  if (seed_ == 0) seed_ = splitmix64_finalize(seed_);
  std::uint64_t x = seed_;
  for (auto& word : s_) {
    x += kGolden;
    word = splitmix64_finalize(x);
  }
}

RngStream RngStream::fork(std::string_view sub) const {
  std::string label = lineage_.label;
  label += '.';
  label += sub;
  return RngStream(lineage_.master_seed, label, lineage_.index);
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform(double lo, double hi) noexcept {
  if (lo == hi) return lo;
  return lo + (hi - lo) * uniform();
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::gaussian(double mu, double sigma) noexcept {
  double z;
  if (has_spare_) {
    has_spare_ = false;
    z = spare_;
  } else {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    z = r * std::cos(theta);
    spare_ = r * std::sin(theta);
    has_spare_ = true;
  }
  return mu + sigma * z;
}

std::uint64_t RngStream::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    fail(ErrorKind::domain, "poisson rate must be finite and nonnegative");
  }
  if (lambda <= 30.0) {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }
  const double v = gaussian(lambda, std::sqrt(lambda));
  return v <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(v));
}

RngStream rng_substream(std::uint64_t master_seed, std::string_view label, std::uint64_t index) {
  return RngStream(master_seed, label, index);
}

double draw_gaussian(RngStream& rng, double mu, double sigma) { return rng.gaussian(mu, sigma); }

std::uint64_t draw_poisson(RngStream& rng, double lambda) { return rng.poisson(lambda); }

}  // namespace tjp
