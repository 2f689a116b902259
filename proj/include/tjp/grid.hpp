#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tjp {

/// Extents of a 2D or 3D row-major array. Axis 0 is the slowest varying.
class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<std::size_t> dims);
  explicit Shape(std::span<const std::size_t> dims);

  std::size_t rank() const noexcept { return rank_; }
  std::size_t operator[](std::size_t axis) const { return dims_[axis]; }
  std::size_t& operator[](std::size_t axis) { return dims_[axis]; }

  /// Number of cells.
  std::size_t size() const noexcept;

  /// Row-major strides in cells; unused trailing entries are zero.
  std::array<std::size_t, 3> strides() const noexcept;

  std::span<const std::size_t> dims() const noexcept { return {dims_.data(), rank_}; }
  std::vector<std::size_t> to_vector() const { return {dims_.begin(), dims_.begin() + rank_}; }
  std::string to_string() const;

  friend bool operator==(const Shape& a, const Shape& b) noexcept {
    return a.rank_ == b.rank_ && a.dims_ == b.dims_;
  }

 private:
  void validate() const;

  std::array<std::size_t, 3> dims_{};
  std::size_t rank_ = 0;
};

/// Scalar intensity array, the carrier for images, patches and field components.
class Grid {
 public:
  Grid() = default;
  explicit Grid(Shape shape, float fill = 0.0f);
  Grid(Shape shape, std::vector<float> data);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.rank(); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }
  std::vector<float>& values() noexcept { return data_; }
  const std::vector<float>& values() const noexcept { return data_; }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  float& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  float at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  float& at(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * shape_[1] + j) * shape_[2] + k]; }
  float at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  /// Physical size per axis; defaults to 1.0.
  const std::array<double, 3>& spacing() const noexcept { return spacing_; }
  void set_spacing(const std::array<double, 3>& spacing) { spacing_ = spacing; }

  bool all_finite() const noexcept;
  std::pair<float, float> minmax() const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<float> data_;
  std::array<double, 3> spacing_{1.0, 1.0, 1.0};
};

/// True when both grids hold the same bytes (distinguishes -0.0 and NaN payloads).
bool bit_equal(const Grid& a, const Grid& b) noexcept;

/// Nonnegative integer labels; 0 is background.
class LabelGrid {
 public:
  LabelGrid() = default;
  explicit LabelGrid(Shape shape, std::uint32_t fill = 0);
  LabelGrid(Shape shape, std::vector<std::uint32_t> data);

  /// Converts a float grid holding exact nonnegative integers.
  static LabelGrid from_grid(const Grid& g);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const std::uint32_t> data() const noexcept { return data_; }
  std::span<std::uint32_t> data() noexcept { return data_; }
  std::uint32_t& operator[](std::size_t i) { return data_[i]; }
  std::uint32_t operator[](std::size_t i) const { return data_[i]; }

 private:
  Shape shape_;
  std::vector<std::uint32_t> data_;
};

}  // namespace tjp
