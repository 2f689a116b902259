#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tjp {

/// Closed interval [lo, hi] for a uniform draw.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

/// Every tunable of the four degradations.
struct DegradationConfig {
  // dual masking
  double mask_ratio = 0.5;  // fraction hidden
  std::uint32_t mask_cell = 4;

  // deformation
  double flow_alpha = 0.6;
  Range flow_sigma_range{1.5, 3.5};
  bool flow_constant_sigma = false;
  bool flow_smoothing = true;
  std::uint32_t perlin_octaves = 4;
  double perlin_persistence = 0.5;
  std::uint32_t perlin_base_spacing = 16;
  double perlin_lacunarity = 2.0;

  // low resolution
  Range down_scale_range{0.25, 0.75};
  Range down_noise_range{0.01, 0.1};
  Range down_sigma_range{0.25, 1.0};
  std::uint32_t sigma_control_spacing = 8;

  // noise
  Range gauss_noise_range{0.075, 0.15};
  double sp_salt_ratio = 0.5;
  Range sp_amount_range{0.01, 0.05};
  double poisson_peak = 255.0;

  // grid preview
  std::uint32_t grid_spacing = 4;
  std::uint32_t grid_line_width = 1;

  /// Throws a configuration error naming the first violated constraint.
  void validate() const;

  friend bool operator==(const DegradationConfig&, const DegradationConfig&) = default;
};

nlohmann::json to_json(const DegradationConfig& cfg);

/// Reads the keys present in `j` over the defaults. Keys not belonging to the
/// config are ignored here; callers reject them with `degradation_keys()`.
DegradationConfig degradation_from_json(const nlohmann::json& j);

const std::vector<std::string>& degradation_keys();

/// FNV-1a of the canonical JSON form.
std::uint64_t config_hash(const DegradationConfig& cfg);

}  // namespace tjp
