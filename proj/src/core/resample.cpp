#include "tjp/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tjp/error.hpp"

namespace tjp {

namespace {

struct Tap {
  std::size_t index;
  double weight;
};

// Applies per-output tap lists along one axis. `taps[o]` lists the input
// indices (along `axis`) feeding output index o; with `mean` set the taps
// are averaged and their weights ignored.
Grid apply_axis(const Grid& in, std::size_t axis, std::size_t out_n, const std::vector<std::vector<Tap>>& taps,
                bool mean) {
  const Shape& s = in.shape();
  std::vector<std::size_t> dims = s.to_vector();
  const std::size_t in_n = dims[axis];
  dims[axis] = out_n;
  Grid out{Shape(std::span<const std::size_t>(dims))};
  auto spacing = in.spacing();
  spacing[axis] *= static_cast<double>(in_n) / static_cast<double>(out_n);
  out.set_spacing(spacing);

  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= s[a];
  for (std::size_t a = axis + 1; a < s.rank(); ++a) inner *= s[a];

  const float* src = in.data().data();
  float* dst = out.data().data();
  std::vector<double> acc(inner);
  for (std::size_t p = 0; p < outer; ++p) {
    const float* plane = src + p * in_n * inner;
    for (std::size_t o = 0; o < out_n; ++o) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const Tap& t : taps[o]) {
        const float* row = plane + t.index * inner;
        if (mean) {
          for (std::size_t q = 0; q < inner; ++q) acc[q] += row[q];
        } else {
          for (std::size_t q = 0; q < inner; ++q) acc[q] += t.weight * row[q];
        }
      }
      float* out_row = dst + (p * out_n + o) * inner;
      const double count = static_cast<double>(taps[o].size());
      for (std::size_t q = 0; q < inner; ++q) {
        out_row[q] = static_cast<float>(mean ? acc[q] / count : acc[q]);
      }
    }
  }
  return out;
}

std::vector<std::vector<Tap>> linear_taps(std::size_t in_n, std::size_t out_n) {
  std::vector<std::vector<Tap>> taps(out_n);
  const double ratio = static_cast<double>(in_n) / static_cast<double>(out_n);
  for (std::size_t o = 0; o < out_n; ++o) {
    double pos = (static_cast<double>(o) + 0.5) * ratio - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(in_n - 1));
    const auto i0 = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i0);
    if (frac == 0.0 || i0 + 1 >= in_n) {
      taps[o].push_back({i0, 1.0});
    } else {
      taps[o].push_back({i0, 1.0 - frac});
      taps[o].push_back({i0 + 1, frac});
    }
  }
  return taps;
}

}  // namespace

Shape scaled_shape(const Shape& in, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) fail(ErrorKind::domain, "scale must lie in (0, 1]");
  std::vector<std::size_t> dims = in.to_vector();
  for (auto& d : dims) d = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(d) * scale)));
  return Shape(std::span<const std::size_t>(dims));
}

Grid resize_linear(const Grid& in, const Shape& out) {
  if (out.rank() != in.rank()) fail(ErrorKind::domain, "resize must preserve rank");
  Grid cur = in;
  for (std::size_t a = 0; a < in.rank(); ++a) {
    if (out[a] == cur.shape()[a]) continue;
    cur = apply_axis(cur, a, out[a], linear_taps(cur.shape()[a], out[a]), false);
  }
  return cur;
}

Grid downsample_area(const Grid& in, std::size_t factor) {
  if (factor == 0) fail(ErrorKind::domain, "area factor must be positive");
  if (factor == 1) return in;
  Grid cur = in;
  for (std::size_t a = 0; a < in.rank(); ++a) {
    const std::size_t n = cur.shape()[a];
    const std::size_t out_n = std::max<std::size_t>(1, n / factor);
    std::vector<std::vector<Tap>> taps(out_n);
    for (std::size_t o = 0; o < out_n; ++o) {
      const std::size_t end = std::min(n, o * factor + factor);
      for (std::size_t i = o * factor; i < end; ++i) taps[o].push_back({i, 1.0});
    }
    cur = apply_axis(cur, a, out_n, taps, true);
  }
  return cur;
}

Grid extract_region(const Grid& in, std::span<const std::size_t> origin, const Shape& window) {
  const Shape& s = in.shape();
  if (origin.size() != s.rank() || window.rank() != s.rank()) fail(ErrorKind::domain, "region rank mismatch");
  for (std::size_t a = 0; a < s.rank(); ++a) {
    if (origin[a] + window[a] > s[a]) fail(ErrorKind::domain, "region exceeds grid extents");
  }
  Grid out(window);
  out.set_spacing(in.spacing());
  const auto st = s.strides();
  const std::size_t row = window[s.rank() - 1];
  float* dst = out.data().data();
  const float* src = in.data().data();
  if (s.rank() == 2) {
    for (std::size_t i = 0; i < window[0]; ++i) {
      std::copy_n(src + (origin[0] + i) * st[0] + origin[1], row, dst + i * row);
    }
  } else {
    for (std::size_t i = 0; i < window[0]; ++i) {
      for (std::size_t j = 0; j < window[1]; ++j) {
        std::copy_n(src + (origin[0] + i) * st[0] + (origin[1] + j) * st[1] + origin[2], row,
                    dst + (i * window[1] + j) * row);
      }
    }
  }
  return out;
}

}  // namespace tjp
