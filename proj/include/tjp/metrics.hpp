#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "tjp/deformation.hpp"
#include "tjp/grid.hpp"

namespace tjp {

inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10 log10(max_val^2 / MSE); +infinity when the grids are identical.
double psnr(const Grid& a, const Grid& b, double max_val);

/// Mean local SSIM with an 11-tap Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, over valid window positions. 3D grids average 2D SSIM over
/// slices along axis 0. Planes smaller than 11 use the largest odd window
/// that fits (sigma scaled to match); planes below 3 cells are rejected.
double ssim(const Grid& a, const Grid& b, double max_val);

/// 2|A & B| / (|A| + |B|) for the cells carrying `label`.
double dice(const LabelGrid& a, const LabelGrid& b, std::uint32_t label);

/// Mean Dice over every label >= 1 present in either grid.
double dice_macro(const LabelGrid& a, const LabelGrid& b);

/// Cells carrying `label` with a face neighbour (or the grid border) that does not.
std::vector<std::size_t> surface_cells(const LabelGrid& g, std::uint32_t label);

/// Squared Euclidean distance (spacing-scaled) from every cell to the
/// nearest marked cell; +infinity when nothing is marked.
std::vector<double> squared_distance_transform(const Shape& shape, const std::vector<std::size_t>& marked,
                                               const std::array<double, 3>& spacing);

/// Linear interpolation between order statistics at rank q * (n - 1).
double percentile(std::vector<double> values, double q);

/// 95th percentile of the pooled surface distances A->B and B->A.
double hd95(const LabelGrid& a, const LabelGrid& b, std::uint32_t label,
            const std::array<double, 3>& spacing = {1.0, 1.0, 1.0});

/// (sdlogj, fraction of interior cells with det J <= 0).
std::pair<double, double> sdlogj(const DeformationField& field);

}  // namespace tjp
