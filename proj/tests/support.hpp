#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "tjp/grid.hpp"

namespace testing {

// Independent of the library RNG so fixtures do not share its bugs.
inline tjp::Grid random_grid(const tjp::Shape& shape, unsigned seed, float lo = 0.0f, float hi = 1.0f) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<float> dist(lo, hi);
  tjp::Grid g(shape);
  for (float& v : g.data()) v = dist(gen);
  return g;
}

inline bool all_finite(const tjp::Grid& g) { return g.all_finite(); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tjp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
