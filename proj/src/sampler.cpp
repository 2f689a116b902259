#include "tjp/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "tjp/error.hpp"
#include "tjp/resample.hpp"

namespace tjp {

void SamplePlan::validate() const {
  if (scales.empty()) fail(ErrorKind::configuration, "sample plan needs at least one scale");
  if (counts.size() != scales.size()) fail(ErrorKind::configuration, "sample plan needs one count per scale");
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) fail(ErrorKind::configuration, "scales must lie in (0, 1]");
  }
  if (window.size() < 2 || window.size() > 3) fail(ErrorKind::configuration, "window must have 2 or 3 extents");
  for (std::size_t w : window) {
    if (w < 1) fail(ErrorKind::configuration, "window extents must be at least 1");
  }
}

namespace {

// k when scale == 1/k for an integer k, else 0.
std::size_t reciprocal_factor(double scale) {
  const double k = std::round(1.0 / scale);
  return std::abs(k * scale - 1.0) < 1e-12 ? static_cast<std::size_t>(k) : 0;
}

}  // namespace

Shape pyramid_shape(const Shape& shape, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) fail(ErrorKind::domain, "scale must lie in (0, 1]");
  if (const std::size_t k = reciprocal_factor(scale)) {
    std::vector<std::size_t> dims = shape.to_vector();
    for (auto& d : dims) d = std::max<std::size_t>(1, d / k);
    return Shape(std::span<const std::size_t>(dims));
  }
  return scaled_shape(shape, scale);
}

Grid resize_to_scale(const Grid& image, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) fail(ErrorKind::domain, "scale must lie in (0, 1]");
  if (scale == 1.0) return image;
  if (const std::size_t k = reciprocal_factor(scale)) return downsample_area(image, k);
  return resize_linear(image, scaled_shape(image.shape(), scale));
}

std::vector<Grid> multiscale_resize(const Grid& image, const std::vector<double>& scales) {
  std::vector<Grid> out;
  out.reserve(scales.size());
  for (double s : scales) out.push_back(resize_to_scale(image, s));
  return out;
}

Window sample_window(const Grid& image, const Shape& window, RngStream& rng) {
  const Shape& s = image.shape();
  if (window.rank() != s.rank()) fail(ErrorKind::domain, "window rank does not match image rank");
  for (std::size_t a = 0; a < s.rank(); ++a) {
    if (window[a] > s[a]) {
      fail(ErrorKind::window_too_large, "window " + window.to_string() + " exceeds image " + s.to_string());
    }
  }
  std::vector<std::size_t> origin(s.rank());
  for (std::size_t a = 0; a < s.rank(); ++a) origin[a] = rng.uniform_index(s[a] - window[a] + 1);
  Grid patch = extract_region(image, origin, window);
  return {std::move(patch), std::move(origin)};
}

Corpus build_corpus(const Grid& source, const SamplePlan& plan, const std::string& source_uri) {
  plan.validate();
  if (plan.window.size() != source.rank()) fail(ErrorKind::domain, "window rank does not match source rank");
  const Shape window(std::span<const std::size_t>(plan.window));

  Corpus corpus;
  std::uint64_t ordinal = 0;
  for (std::size_t si = 0; si < plan.scales.size(); ++si) {
    const double scale = plan.scales[si];
    const Shape scaled = pyramid_shape(source.shape(), scale);
    bool fits = true;
    for (std::size_t a = 0; a < scaled.rank(); ++a) fits = fits && window[a] <= scaled[a];
    if (!fits) {
      corpus.skips.push_back({source_uri, scale,
                              "scaled extents " + scaled.to_string() + " smaller than window " + window.to_string()});
      continue;
    }
    if (plan.counts[si] == 0) continue;
    const Grid level = resize_to_scale(source, scale);
    for (std::uint64_t n = 0; n < plan.counts[si]; ++n, ++ordinal) {
      RngStream rng(plan.master_seed, kSampleLabel, ordinal);
      Window w = sample_window(level, window, rng);
      corpus.records.push_back({ordinal, source_uri, scale, w.origin, plan.window, rng.lineage()});
      corpus.patches.push_back(std::move(w.patch));
    }
  }
  if (corpus.records.empty()) fail(ErrorKind::empty_corpus, "no scale could hold the sampling window");
  return corpus;
}

}  // namespace tjp
