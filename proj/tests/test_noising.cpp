#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tjp/error.hpp"
#include "tjp/noising.hpp"

using namespace tjp;

namespace {

DegradationConfig all_off() {
  DegradationConfig cfg;
  cfg.gauss_noise_range = {0.0, 0.0};
  cfg.poisson_peak = 0.0;
  cfg.sp_amount_range = {0.0, 0.0};
  return cfg;
}

}  // namespace

TEST_CASE("all stages disabled is the bit identity") {
  const DegradationConfig cfg = all_off();
  for (unsigned seed = 0; seed < 5; ++seed) {
    Grid x = testing::random_grid(Shape{33, 47}, seed);
    x[0] = 0.0f;
    x[1] = 1.0f;
    const NoiseResult r = degrade_noise(x, cfg, RngStream(seed, "noise", 0));
    CHECK(bit_equal(r.image, x));
    CHECK(r.params.sp_cells == 0);
  }
}

TEST_CASE("negative zero input comes out nonnegative") {
  const Grid x(Shape{8, 8}, -0.0f);
  const NoiseResult r = degrade_noise(x, all_off(), RngStream(1, "noise", 0));
  for (float v : r.image.data()) CHECK_FALSE(std::signbit(v));
}

TEST_CASE("salt and pepper alters exactly the drawn number of cells") {
  DegradationConfig cfg = all_off();
  cfg.sp_amount_range = {0.04, 0.04};
  const Grid x = testing::random_grid(Shape{256, 256}, 3, 0.01f, 0.99f);
  const NoiseResult r = degrade_noise(x, cfg, RngStream(9, "noise", 0));
  std::size_t altered = 0, salt = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (r.image[i] != x[i]) {
      ++altered;
      CHECK((r.image[i] == 0.0f || r.image[i] == 1.0f));
      salt += r.image[i] == 1.0f;
    }
  }
  CHECK(r.params.sp_amount == 0.04);
  CHECK(altered == static_cast<std::size_t>(std::llround(0.04 * 65536)));
  CHECK(altered == r.params.sp_cells);
  CHECK(salt == r.params.salt_cells);
  CHECK(std::abs(static_cast<double>(altered) / 65536.0 - 0.04) < 0.005);
  // Salt share follows sp_salt_ratio = 0.5.
  CHECK(std::abs(static_cast<double>(salt) / static_cast<double>(altered) - 0.5) < 0.05);
}

TEST_CASE("poisson stage matches the photon-count mean and variance") {
  DegradationConfig cfg = all_off();
  cfg.poisson_peak = 255.0;
  const Grid x(Shape{250, 400}, 0.5f);
  const NoiseResult r = degrade_noise(x, cfg, RngStream(2, "noise", 0));
  double sum = 0, sq = 0;
  for (float v : r.image.data()) {
    sum += v;
    sq += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(r.image.size());
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 0.005);
  CHECK(std::abs(var / (0.5 / 255.0) - 1.0) < 0.2);
}

TEST_CASE("default noise stays in [0, 1.5] and records its draws") {
  const DegradationConfig cfg;
  const Grid x = testing::random_grid(Shape{20, 20, 20}, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const NoiseResult r = degrade_noise(x, cfg, RngStream(seed, "noise", 7));
    const auto [lo, hi] = r.image.minmax();
    CHECK(lo >= 0.0f);
    CHECK(hi <= 1.5f);
    CHECK(r.params.sigma_noise >= 0.075);
    CHECK(r.params.sigma_noise <= 0.15);
    CHECK(r.params.sp_amount >= 0.01);
    CHECK(r.params.sp_amount <= 0.05);
    CHECK(r.params.poisson_peak == 255.0);
  }
  const NoiseResult a = degrade_noise(x, cfg, RngStream(1, "noise", 0));
  const NoiseResult b = degrade_noise(x, cfg, RngStream(1, "noise", 0));
  CHECK(bit_equal(a.image, b.image));
}

TEST_CASE("gaussian stage clamps at zero") {
  DegradationConfig cfg = all_off();
  cfg.gauss_noise_range = {0.1, 0.1};
  const Grid x(Shape{100, 100}, 0.0f);
  const NoiseResult r = degrade_noise(x, cfg, RngStream(3, "noise", 0));
  std::size_t zeros = 0;
  for (float v : r.image.data()) {
    CHECK(v >= 0.0f);
    zeros += v == 0.0f;
  }
  // About half the draws are negative and clamp to zero.
  CHECK(std::abs(static_cast<double>(zeros) / 10000.0 - 0.5) < 0.03);
}

TEST_CASE("inputs outside [0, 1] are rejected") {
  Grid x(Shape{4, 4}, 0.5f);
  x[3] = 1.01f;
  CHECK_THROWS_AS(degrade_noise(x, DegradationConfig{}, RngStream(1, "noise", 0)), Error);
  x[3] = -0.01f;
  CHECK_THROWS_AS(degrade_noise(x, DegradationConfig{}, RngStream(1, "noise", 0)), Error);
  x[3] = 1.0f + 5e-7f;
  CHECK_NOTHROW(degrade_noise(x, DegradationConfig{}, RngStream(1, "noise", 0)));
}
