#pragma once

#include <cstdint>

#include "tjp/config.hpp"
#include "tjp/grid.hpp"
#include "tjp/rng.hpp"

namespace tjp {

/// Per-cell Gaussian standard deviation, smooth in space.
struct SigmaField {
  Grid values;
  Range range;
  std::uint32_t control_spacing = 8;
};

/// U(range) draws on a lattice every `control_spacing` cells, multilinearly
/// interpolated to full resolution.
SigmaField sigma_field(const Shape& shape, Range range, std::uint32_t control_spacing, RngStream& rng);

/// Same field everywhere.
SigmaField constant_sigma_field(const Shape& shape, double sigma);

inline constexpr float kSigmaIdentityCutoff = 0.05f;

/// output(v) = sum_u g_sigma(v)(u) x(v - u), with radius ceil(3 sigma(v)) and
/// the kernel renormalized over the part that falls inside the grid.
/// Cells with sigma below 0.05 pass through unchanged.
Grid spatially_varying_gaussian(const Grid& x, const SigmaField& sf);

struct LowresParams {
  double scale = 1.0;
  double sigma_down = 0.0;
  Shape intermediate;
  Lineage noise_lineage;
  Lineage sigma_lineage;
};

struct LowresResult {
  Grid image;
  LowresParams params;
};

/// Blur_sigma_field( up_{1/s}( down_s( x + eta ) ) ) with s ~ U(down_scale_range),
/// eta ~ N(0, sigma_down^2), sigma_down ~ U(down_noise_range); linear
/// resampling both ways; the output keeps the input extents.
LowresResult degrade_lowres(const Grid& x, const DegradationConfig& cfg, const RngStream& rng);

}  // namespace tjp
