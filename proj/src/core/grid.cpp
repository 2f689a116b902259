#include "tjp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tjp/error.hpp"

namespace tjp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::window_too_large: return "window too large";
    case ErrorKind::empty_corpus: return "empty corpus";
    case ErrorKind::degenerate_mask: return "degenerate mask";
    case ErrorKind::degenerate_field: return "degenerate field";
    case ErrorKind::undefined_metric: return "undefined metric";
    case ErrorKind::format: return "format error";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::manifest: return "manifest error";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

Shape::Shape(std::initializer_list<std::size_t> dims) : Shape(std::span<const std::size_t>(dims.begin(), dims.size())) {}

Shape::Shape(std::span<const std::size_t> dims) {
  if (dims.size() < 2 || dims.size() > 3) {
    fail(ErrorKind::domain, "grid rank must be 2 or 3, got " + std::to_string(dims.size()));
  }
  rank_ = dims.size();
  std::copy(dims.begin(), dims.end(), dims_.begin());
  validate();
}

void Shape::validate() const {
  for (std::size_t a = 0; a < rank_; ++a) {
    if (dims_[a] == 0) fail(ErrorKind::domain, "grid extents must be positive: " + to_string());
  }
}

std::size_t Shape::size() const noexcept {
  if (rank_ == 0) return 0;
  std::size_t n = 1;
  for (std::size_t a = 0; a < rank_; ++a) n *= dims_[a];
  return n;
}

std::array<std::size_t, 3> Shape::strides() const noexcept {
  std::array<std::size_t, 3> s{};
  std::size_t acc = 1;
  for (std::size_t a = rank_; a-- > 0;) {
    s[a] = acc;
    acc *= dims_[a];
  }
  return s;
}

std::string Shape::to_string() const {
  std::string out = "(";
  for (std::size_t a = 0; a < rank_; ++a) {
    if (a) out += ", ";
    out += std::to_string(dims_[a]);
  }
  return out + ")";
}

Grid::Grid(Shape shape, float fill) : shape_(shape), data_(shape.size(), fill) {
  if (shape.rank() == 0) fail(ErrorKind::domain, "grid needs a shape");
}

Grid::Grid(Shape shape, std::vector<float> data) : shape_(shape), data_(std::move(data)) {
  if (shape.rank() == 0) fail(ErrorKind::domain, "grid needs a shape");
  if (data_.size() != shape_.size()) {
    fail(ErrorKind::domain, "grid data length " + std::to_string(data_.size()) + " does not match shape " +
                                shape_.to_string());
  }
}

bool Grid::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

std::pair<float, float> Grid::minmax() const {
  if (data_.empty()) fail(ErrorKind::domain, "empty grid");
  auto [lo, hi] = std::minmax_element(data_.begin(), data_.end());
  return {*lo, *hi};
}

bool bit_equal(const Grid& a, const Grid& b) noexcept {
  return a.shape() == b.shape() &&
         std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(float)) == 0;
}

LabelGrid::LabelGrid(Shape shape, std::uint32_t fill) : shape_(shape), data_(shape.size(), fill) {}

LabelGrid::LabelGrid(Shape shape, std::vector<std::uint32_t> data) : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) fail(ErrorKind::domain, "label data length does not match shape");
}

LabelGrid LabelGrid::from_grid(const Grid& g) {
  std::vector<std::uint32_t> labels(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const float v = g[i];
    if (!(v >= 0.0f) || v != std::floor(v) || v > 4294967295.0f) {
      fail(ErrorKind::domain, "label grids must hold nonnegative integers");
    }
    labels[i] = static_cast<std::uint32_t>(v);
  }
  return LabelGrid(g.shape(), std::move(labels));
}

}  // namespace tjp
