#include "tjp/config.hpp"

#include <cmath>

#include "tjp/error.hpp"
#include "tjp/rng.hpp"

namespace tjp {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::configuration, what);
}

void check_range(const Range& r, const char* name, bool unit) {
  require(std::isfinite(r.lo) && std::isfinite(r.hi), std::string(name) + ": bounds must be finite");
  require(r.lo <= r.hi, std::string(name) + ": lo must not exceed hi");
  if (unit) require(r.lo >= 0.0 && r.hi <= 1.0, std::string(name) + ": must lie in [0, 1]");
}

void check_fraction(double v, const char* name) {
  require(v >= 0.0 && v <= 1.0, std::string(name) + " must lie in [0, 1]");
}

nlohmann::json range_json(const Range& r) { return nlohmann::json::array({r.lo, r.hi}); }

Range range_from(const nlohmann::json& j, const char* name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(ErrorKind::configuration, std::string(name) + " must be a [lo, hi] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    if constexpr (std::is_same_v<T, Range>) {
      out = range_from(*it, key);
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) fail(ErrorKind::configuration, std::string(key) + " must be a boolean");
      out = it->get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer() || it->get<long long>() < 0) {
        fail(ErrorKind::configuration, std::string(key) + " must be a nonnegative integer");
      }
      out = it->get<T>();
    } else {
      if (!it->is_number()) fail(ErrorKind::configuration, std::string(key) + " must be a number");
      out = it->get<T>();
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::configuration, std::string(key) + ": " + e.what());
  }
}

}  // namespace

void DegradationConfig::validate() const {
  check_fraction(mask_ratio, "mask_ratio");
  require(mask_cell >= 1, "mask_cell must be at least 1");
  require(std::isfinite(flow_alpha) && flow_alpha >= 0.0, "flow_alpha must be nonnegative");
  check_range(flow_sigma_range, "flow_sigma_range", false);
  require(flow_sigma_range.lo >= 0.0, "flow_sigma_range must be nonnegative");
  require(perlin_octaves >= 1, "perlin_octaves must be at least 1");
  require(perlin_persistence > 0.0 && perlin_persistence <= 1.0, "perlin_persistence must lie in (0, 1]");
  require(perlin_base_spacing >= 2, "perlin_base_spacing must be at least 2");
  require(std::isfinite(perlin_lacunarity) && perlin_lacunarity > 1.0, "perlin_lacunarity must exceed 1");
  check_range(down_scale_range, "down_scale_range", true);
  require(down_scale_range.lo > 0.0, "down_scale_range must be positive");
  check_range(down_noise_range, "down_noise_range", false);
  require(down_noise_range.lo >= 0.0, "down_noise_range must be nonnegative");
  check_range(down_sigma_range, "down_sigma_range", false);
  require(down_sigma_range.lo >= 0.0, "down_sigma_range must be nonnegative");
  require(sigma_control_spacing >= 1, "sigma_control_spacing must be at least 1");
  check_range(gauss_noise_range, "gauss_noise_range", false);
  require(gauss_noise_range.lo >= 0.0, "gauss_noise_range must be nonnegative");
  check_fraction(sp_salt_ratio, "sp_salt_ratio");
  check_range(sp_amount_range, "sp_amount_range", true);
  require(std::isfinite(poisson_peak) && poisson_peak >= 0.0, "poisson_peak must be nonnegative");
  require(grid_spacing >= 1, "grid_spacing must be at least 1");
  require(grid_line_width >= 1, "grid_line_width must be at least 1");
}

nlohmann::json to_json(const DegradationConfig& c) {
  nlohmann::json j;
  j["mask_ratio"] = c.mask_ratio;
  j["mask_cell"] = c.mask_cell;
  j["flow_alpha"] = c.flow_alpha;
  j["flow_sigma_range"] = range_json(c.flow_sigma_range);
  j["flow_constant_sigma"] = c.flow_constant_sigma;
  j["flow_smoothing"] = c.flow_smoothing;
  j["perlin_octaves"] = c.perlin_octaves;
  j["perlin_persistence"] = c.perlin_persistence;
  j["perlin_base_spacing"] = c.perlin_base_spacing;
  j["perlin_lacunarity"] = c.perlin_lacunarity;
  j["down_scale_range"] = range_json(c.down_scale_range);
  j["down_noise_range"] = range_json(c.down_noise_range);
  j["down_sigma_range"] = range_json(c.down_sigma_range);
  j["sigma_control_spacing"] = c.sigma_control_spacing;
  j["gauss_noise_range"] = range_json(c.gauss_noise_range);
  j["sp_salt_ratio"] = c.sp_salt_ratio;
  j["sp_amount_range"] = range_json(c.sp_amount_range);
  j["poisson_peak"] = c.poisson_peak;
  j["grid_spacing"] = c.grid_spacing;
  j["grid_line_width"] = c.grid_line_width;
  return j;
}

DegradationConfig degradation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::configuration, "config must be a JSON object");
  DegradationConfig c;
  read(j, "mask_ratio", c.mask_ratio);
  read(j, "mask_cell", c.mask_cell);
  read(j, "flow_alpha", c.flow_alpha);
  read(j, "flow_sigma_range", c.flow_sigma_range);
  read(j, "flow_constant_sigma", c.flow_constant_sigma);
  read(j, "flow_smoothing", c.flow_smoothing);
  read(j, "perlin_octaves", c.perlin_octaves);
  read(j, "perlin_persistence", c.perlin_persistence);
  read(j, "perlin_base_spacing", c.perlin_base_spacing);
  read(j, "perlin_lacunarity", c.perlin_lacunarity);
  read(j, "down_scale_range", c.down_scale_range);
  read(j, "down_noise_range", c.down_noise_range);
  read(j, "down_sigma_range", c.down_sigma_range);
  read(j, "sigma_control_spacing", c.sigma_control_spacing);
  read(j, "gauss_noise_range", c.gauss_noise_range);
  read(j, "sp_salt_ratio", c.sp_salt_ratio);
  read(j, "sp_amount_range", c.sp_amount_range);
  read(j, "poisson_peak", c.poisson_peak);
  read(j, "grid_spacing", c.grid_spacing);
  read(j, "grid_line_width", c.grid_line_width);
  c.validate();
  return c;
}

const std::vector<std::string>& degradation_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    const nlohmann::json defaults = to_json(DegradationConfig{});
    for (const auto& [key, value] : defaults.items()) k.push_back(key);
    return k;
  }();
  return keys;
}

std::uint64_t config_hash(const DegradationConfig& cfg) { return fnv1a64(to_json(cfg).dump()); }

}  // namespace tjp
