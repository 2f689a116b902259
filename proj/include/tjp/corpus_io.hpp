#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tjp/config.hpp"
#include "tjp/grid.hpp"
#include "tjp/sampler.hpp"

namespace tjp {

// ---------------------------------------------------------------------------
// Array container: NumPy .npy v1.0, '<f4', C order, rank 2 or 3.

std::vector<std::uint8_t> encode_array(const Grid& grid);
Grid decode_array(const std::vector<std::uint8_t>& bytes);

void write_array(const Grid& grid, const std::filesystem::path& path);
Grid read_array(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Raw little-endian blobs described by a sidecar JSON header
// {"shape": [...], "dtype": "<f4" | "<u2" | "<u1" | "<i2", "intensity_range": [lo, hi]}.
// The sidecar of "vol.raw" is "vol.raw.json". Tiles are read with seeks, so
// sources larger than memory can be streamed.

struct BlobHeader {
  std::vector<std::size_t> shape;
  std::string dtype = "<f4";
  std::optional<Range> intensity_range;
};

class BlobSource {
 public:
  explicit BlobSource(std::filesystem::path blob);

  const BlobHeader& header() const noexcept { return header_; }
  Shape shape() const { return Shape(std::span<const std::size_t>(header_.shape)); }

  /// Raw values (converted to float, not normalized) of one region.
  Grid read_region(std::span<const std::size_t> origin, const Shape& extents) const;
  Grid read_all() const;

 private:
  std::filesystem::path path_;
  BlobHeader header_;
  std::size_t item_bytes_ = 4;
};

std::filesystem::path sidecar_path(const std::filesystem::path& blob);
void write_blob(const Grid& grid, const std::filesystem::path& blob, const std::optional<Range>& intensity_range = {});

// ---------------------------------------------------------------------------
// Tiling.

/// Row-major tile origins at multiples of `stride`, with the last origin per
/// axis clamped so the final tile touches the boundary.
std::vector<std::vector<std::size_t>> tile_iter(const Shape& source, const Shape& tile, std::span<const std::size_t> stride);

// ---------------------------------------------------------------------------
// Corpus manifest.

inline constexpr const char* kManifestVersion = "tjp-manifest/1";

struct SourceEntry {
  std::string uri;
  std::vector<std::size_t> shape;
  Range intensity_range;
};

struct TaskEntry {
  Lineage lineage;
  nlohmann::json params = nlohmann::json::object();
  std::map<std::string, std::string> outputs;
};

struct ManifestPatch {
  PatchRecord record;
  std::size_t source_index = 0;
  std::string clean_file;
  std::map<std::string, TaskEntry> tasks;  // keyed by mask / deform / lowres / noise
};

struct CorpusManifest {
  std::string version = kManifestVersion;
  std::uint64_t master_seed = 0;
  DegradationConfig config;
  SamplePlan plan;
  std::vector<SourceEntry> sources;
  std::vector<ManifestPatch> patches;
  std::vector<SkipRecord> skips;
};

nlohmann::json lineage_to_json(const Lineage& l);
Lineage lineage_from_json(const nlohmann::json& j);

nlohmann::json manifest_to_json(const CorpusManifest& m);
CorpusManifest manifest_from_json(const nlohmann::json& j);

/// Sorted keys, two-space indent, LF newlines, shortest round-trip floats.
std::string canonical_json(const nlohmann::json& j);

void write_manifest(const CorpusManifest& m, const std::filesystem::path& path);
CorpusManifest read_manifest(const std::filesystem::path& path);

}  // namespace tjp
