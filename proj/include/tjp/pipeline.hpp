#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tjp/config.hpp"
#include "tjp/corpus_io.hpp"
#include "tjp/grid.hpp"
#include "tjp/sampler.hpp"

namespace tjp {

// ---------------------------------------------------------------------------
// Run configuration: one flat JSON object holding DegradationConfig keys plus
// "scales", "counts" and "window". Unknown keys are rejected.

struct RunConfig {
  DegradationConfig degradation;
  SamplePlan plan;
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& rc);

// ---------------------------------------------------------------------------
// Sources.

struct LoadedSource {
  Grid image;  // normalized to [0, 1]
  SourceEntry entry;
};

/// Reads a .npy array or a raw blob with a sidecar header. Intensities map to
/// [0, 1] through the sidecar's intensity_range when present (clamped), else
/// through the source's own min and max.
LoadedSource load_source(const std::filesystem::path& path);

/// Smooth band-limited test volume with values in [0, 1].
Grid synthetic_volume(const Shape& shape, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Tasks.

enum class Task { mask, deform, lowres, noise };

inline constexpr Task kAllTasks[] = {Task::mask, Task::deform, Task::lowres, Task::noise};

std::string_view to_string(Task t);
Task task_from_string(std::string_view s);  // throws configuration error

struct TaskOutput {
  nlohmann::json params;
  std::vector<std::pair<std::string, Grid>> arrays;  // output name -> array, in write order
};

/// Runs one degradation on a clean patch with the stream (seed, task name, patch ordinal).
TaskOutput run_task(Task task, const Grid& clean, const DegradationConfig& cfg, std::uint64_t seed, std::uint64_t ordinal);

// ---------------------------------------------------------------------------
// Corpus generation and verification.

struct GenerateOptions {
  std::vector<Task> tasks;  // empty: sampling only
  unsigned jobs = 0;        // 0: hardware concurrency
};

/// Samples `source`, applies the tasks to every patch and writes arrays under
/// out/patches plus out/manifest.json. Output bytes do not depend on `jobs`.
CorpusManifest generate_corpus(const LoadedSource& source, const RunConfig& rc, const std::filesystem::path& out,
                               const GenerateOptions& opts);

/// Treats the whole source as one patch (scale 1) and applies a single task.
CorpusManifest degrade_whole(const LoadedSource& source, Task task, const DegradationConfig& cfg, std::uint64_t seed,
                             const std::filesystem::path& out);

struct VerifyReport {
  std::size_t passed = 0;
  std::size_t failed = 0;
};

/// Regenerates every patch and task output named by the manifest and compares
/// bytes with the files on disk; one PASS/FAIL line per entry goes to `log`.
VerifyReport verify_manifest(const std::filesystem::path& manifest, std::ostream& log, unsigned jobs = 0);

// ---------------------------------------------------------------------------
// Logging controlled by TJP_LOG=error|info|debug (default error).

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level();
void log(LogLevel level, const std::string& message);

}  // namespace tjp
