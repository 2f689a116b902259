#pragma once

#include <cstdint>

#include "tjp/config.hpp"
#include "tjp/grid.hpp"
#include "tjp/rng.hpp"

namespace tjp {

inline constexpr float kPoissonCeiling = 1.5f;

struct NoiseParams {
  double sigma_noise = 0.0;
  double poisson_peak = 0.0;
  double sp_amount = 0.0;
  std::uint64_t sp_cells = 0;  // cells overwritten by salt or pepper
  std::uint64_t salt_cells = 0;
};

struct NoiseResult {
  Grid image;
  NoiseParams params;
};

/// Gaussian (clamped below at 0), then Poisson photon noise at
/// cfg.poisson_peak photons per unit intensity (0 disables; clamped to 1.5),
/// then salt-and-pepper on exactly round(amount * cells) distinct cells.
/// Input must lie in [0, 1] (1e-6 slack).
NoiseResult degrade_noise(const Grid& x, const DegradationConfig& cfg, const RngStream& rng);

}  // namespace tjp
