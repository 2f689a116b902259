#pragma once

#include <cstdint>

#include "tjp/config.hpp"
#include "tjp/grid.hpp"
#include "tjp/rng.hpp"

namespace tjp {

/// Two visibility masks on the coarse mask lattice (1 = visible).
struct MaskPair {
  Grid lattice_a;
  Grid lattice_b;
  std::uint32_t cell = 4;
  double tau_keep = 0.5;
  std::uint32_t attempts = 1;  // draws needed to satisfy the joint-hidden invariant

  /// Lattice cells hidden in both masks.
  std::size_t jointly_hidden() const;
};

/// Lattice extents: ceil(extent / cell) per axis.
Shape mask_lattice_shape(const Shape& shape, std::uint32_t cell);

/// One uniform per lattice cell, visible iff the draw is below tau_keep.
Grid generate_mask_lattice(const Shape& lattice, double tau_keep, RngStream& rng);

/// Nearest-neighbour block replication of a lattice to full resolution;
/// partial border blocks take their lattice cell's value.
Grid expand_mask(const Grid& lattice, const Shape& shape, std::uint32_t cell);

/// Full-resolution binary mask.
Grid generate_mask(const Shape& shape, std::uint32_t cell, double tau_keep, RngStream& rng);

struct DualMaskResult {
  Grid x_a;
  Grid x_b;
  MaskPair pair;
};

inline constexpr std::uint32_t kMaxMaskDraws = 16;

/// x_a = x * M_A, x_b = x * M_B using forks "maskA" and "maskB" of `rng`,
/// redrawn (up to 16 draws) until some lattice cell is hidden in both.
DualMaskResult dual_mask(const Grid& x, const DegradationConfig& cfg, const RngStream& rng);

}  // namespace tjp
