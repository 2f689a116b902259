#pragma once

#include <cstdint>
#include <vector>

#include "tjp/config.hpp"
#include "tjp/grid.hpp"
#include "tjp/rng.hpp"

namespace tjp {

/// Gradient-lattice simplex noise for one octave. Gradients (random unit
/// vectors) and the lattice hash permutation are drawn from the stream at
/// construction; evaluate() is bounded by 1 in magnitude.
class SimplexNoise {
 public:
  SimplexNoise(std::size_t rank, RngStream& rng);

  double evaluate(double x, double y) const;
  double evaluate(double x, double y, double z) const;

 private:
  std::size_t hash(long i, long j) const;
  std::size_t hash(long i, long j, long k) const;

  std::size_t rank_;
  std::vector<std::uint8_t> perm_;
  std::vector<double> gradients_;  // 256 * rank
};

/// sum_{n=1..N} p^{n-1} * S_n(f^{n-1} * x / base_spacing + offset_n); every
/// octave has its own gradients and a random lattice offset.
Grid perlin_field(const Shape& shape, std::uint32_t octaves, double persistence, std::uint32_t base_spacing,
                  double lacunarity, RngStream& rng);

/// Displacement per axis in normalized units: 1.0 is half the axis extent.
struct DeformationField {
  Shape shape;
  std::vector<Grid> comp;  // one per axis, axis order of `shape`
  double alpha = 0.0;
  std::vector<double> sigma_used;  // mean smoothing sigma per component (0 when unsmoothed)
  std::vector<Lineage> provenance;  // Perlin stream per component

  /// Displacement of axis `a` at flat index `i`, in cells.
  double cells(std::size_t a, std::size_t i) const {
    return static_cast<double>(comp[a][i]) * static_cast<double>(shape[a]) * 0.5;
  }
};

DeformationField zero_field(const Shape& shape);

/// alpha * tanh(z-normalized raw); a component with variance below 1e-12 is
/// only centred. The result never exceeds alpha in magnitude.
Grid bound_component(const Grid& raw, double alpha);

/// Per axis: Perlin noise from fork "flow<axis>", spatially varying Gaussian
/// smoothing with a sigma field from fork "flowsigma<axis>", then
/// bound_component with cfg.flow_alpha.
DeformationField deformation_field(const Shape& shape, const DegradationConfig& cfg, const RngStream& rng);

/// output(v) = x(v + displacement(v)) by multilinear interpolation; samples
/// outside the grid read zero.
Grid warp(const Grid& x, const DeformationField& field);

struct JacobianStats {
  double sdlogj = 0.0;
  double nonpos_fraction = 0.0;
  std::size_t interior_cells = 0;
};

/// Central-difference Jacobian of identity + displacement (cell units) at
/// interior cells. sdlogj is the population standard deviation of log det J
/// over cells with det J > 0.
JacobianStats jacobian_stats(const DeformationField& field);

/// Determinants at interior cells, row-major over the interior.
std::vector<double> jacobian_determinants(const DeformationField& field);

/// 1 on cells within line_width of a lattice line (index % spacing < line_width on any axis).
Grid grid_image(const Shape& shape, std::uint32_t spacing, std::uint32_t line_width);

}  // namespace tjp
