#pragma once

#include <cstddef>
#include <span>

#include "tjp/grid.hpp"

namespace tjp {

/// Separable linear interpolation to `out` extents with cell-centre alignment:
/// output index o samples input position (o + 0.5) * in / out - 0.5, clamped
/// to the valid range. Every output is a convex combination of inputs.
Grid resize_linear(const Grid& in, const Shape& out);

/// Block mean over `factor` cells per axis. Output extent is floor(n / factor),
/// at least 1; a short axis averages whatever cells it has.
Grid downsample_area(const Grid& in, std::size_t factor);

/// floor(extent * scale) per axis, minimum 1.
Shape scaled_shape(const Shape& in, double scale);

/// Copy of the sub-array starting at `origin` with extents `window`.
Grid extract_region(const Grid& in, std::span<const std::size_t> origin, const Shape& window);

}  // namespace tjp
