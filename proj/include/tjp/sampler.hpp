#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tjp/grid.hpp"
#include "tjp/rng.hpp"

namespace tjp {

/// How many windows to draw at each pyramid level.
struct SamplePlan {
  std::vector<double> scales{1.0, 0.5, 0.25};
  std::vector<std::uint64_t> counts{1, 1, 1};
  std::vector<std::size_t> window{32, 32};
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct PatchRecord {
  std::uint64_t patch_id = 0;
  std::string source_uri;
  double scale = 1.0;
  std::vector<std::size_t> origin;
  std::vector<std::size_t> window;
  Lineage lineage;  // stream that drew the origin

  friend bool operator==(const PatchRecord&, const PatchRecord&) = default;
};

struct SkipRecord {
  std::string source_uri;
  double scale = 1.0;
  std::string reason;

  friend bool operator==(const SkipRecord&, const SkipRecord&) = default;
};

struct Corpus {
  std::vector<Grid> patches;
  std::vector<PatchRecord> records;
  std::vector<SkipRecord> skips;
};

inline constexpr const char* kSampleLabel = "sample";

/// Area averaging for scales 1/k, linear interpolation otherwise; scale 1 is a copy.
std::vector<Grid> multiscale_resize(const Grid& image, const std::vector<double>& scales);
Grid resize_to_scale(const Grid& image, double scale);
/// Extents resize_to_scale produces: floor(extent * scale), at least 1.
Shape pyramid_shape(const Shape& shape, double scale);

struct Window {
  Grid patch;
  std::vector<std::size_t> origin;
};

/// Uniform origin over every valid start per axis, then a copy of that region.
Window sample_window(const Grid& image, const Shape& window, RngStream& rng);

/// Resizes once per scale and draws counts[i] windows from it, seeding each
/// draw with (master_seed, "sample", patch ordinal). Scales that cannot hold
/// the window are reported in `skips`.
Corpus build_corpus(const Grid& source, const SamplePlan& plan, const std::string& source_uri = "");

}  // namespace tjp
