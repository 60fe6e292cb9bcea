#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivf/errors.hpp"
#include "ivf/geometry.hpp"

namespace ivf {

struct PixelGrid {
  int width = 0;   // N columns
  int height = 0;  // M rows

  bool operator==(const PixelGrid&) const = default;
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
};

inline PixelGrid make_grid(int width, int height) {
  if (width < 1 || height < 1) throw InvalidSpec("grid dimensions must be >= 1");
  return PixelGrid{width, height};
}

// Coordinates of the pixel at row i, column j: (x = j, y = i), origin at the
// top-left pixel center.
inline Vec2 pixel_coords(int i, int j) {
  return Vec2(static_cast<double>(j), static_cast<double>(i));
}

// Boolean membership per pixel, row-major. `count` is maintained internally.
class SegmentationMask {
 public:
  SegmentationMask() = default;
  SegmentationMask(PixelGrid grid, std::vector<std::uint8_t> membership)
      : grid_(grid), membership_(std::move(membership)) {
    if (membership_.size() != grid_.pixel_count()) {
      throw DimensionMismatch("mask membership size does not match its grid");
    }
    for (std::uint8_t m : membership_) count_ += (m != 0);
  }

  static SegmentationMask full(PixelGrid grid) {
    return SegmentationMask(grid, std::vector<std::uint8_t>(grid.pixel_count(), 1));
  }

  const PixelGrid& grid() const { return grid_; }
  std::size_t count() const { return count_; }
  bool at(int i, int j) const {
    return membership_[static_cast<std::size_t>(i) * grid_.width + j] != 0;
  }
  const std::vector<std::uint8_t>& membership() const { return membership_; }

  // Row-major list of (i, j) member pixels.
  std::vector<std::pair<int, int>> pixels() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(count_);
    for (int i = 0; i < grid_.height; ++i)
      for (int j = 0; j < grid_.width; ++j)
        if (at(i, j)) out.emplace_back(i, j);
    return out;
  }

 private:
  PixelGrid grid_;
  std::vector<std::uint8_t> membership_;
  std::size_t count_ = 0;
};

struct Keypoints2D {
  std::vector<Vec2> positions;
  std::size_t size() const { return positions.size(); }
};

// Per-pixel, per-keypoint 2-vectors. Storage is keypoint-major, then
// row-major: entry (k, i, j) lives at k*M*N + i*N + j. The same container
// backs both the state and its gradient estimates; ground-truth construction
// yields unit vectors, refined states are free.
class VectorField {
 public:
  VectorField() = default;
  VectorField(PixelGrid grid, int keypoint_count)
      : grid_(grid),
        keypoint_count_(keypoint_count),
        data_(grid.pixel_count() * static_cast<std::size_t>(keypoint_count), Vec2::Zero()) {
    if (keypoint_count < 1) throw InvalidSpec("keypoint count must be >= 1");
  }

  const PixelGrid& grid() const { return grid_; }
  int keypoint_count() const { return keypoint_count_; }
  std::size_t size() const { return data_.size(); }

  bool same_shape(const VectorField& other) const {
    return grid_ == other.grid_ && keypoint_count_ == other.keypoint_count_;
  }

  std::size_t index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * grid_.height + static_cast<std::size_t>(i)) *
               grid_.width +
           static_cast<std::size_t>(j);
  }
  Vec2& at(int k, int i, int j) { return data_[index(k, i, j)]; }
  const Vec2& at(int k, int i, int j) const { return data_[index(k, i, j)]; }

  std::vector<Vec2>& data() { return data_; }
  const std::vector<Vec2>& data() const { return data_; }

  bool all_finite() const {
    for (const Vec2& v : data_)
      if (!v.allFinite()) return false;
    return true;
  }

 private:
  PixelGrid grid_;
  int keypoint_count_ = 0;
  std::vector<Vec2> data_;
};

using VectorFieldState = VectorField;
using InnovationField = VectorField;

inline void require_same_shape(const VectorField& a, const VectorField& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch("vector fields have different shapes");
  }
}

inline void require_grid_match(const VectorField& f, const SegmentationMask& mask) {
  if (!(f.grid() == mask.grid())) {
    throw DimensionMismatch("field grid does not match mask grid");
  }
}

// Unit vectors pointing from every masked pixel toward each keypoint.
// A pixel within 1e-12 of its keypoint stores (0,0); so do unmasked pixels.
inline VectorFieldState ground_truth_field(const Keypoints2D& keypoints, PixelGrid grid,
                                           const SegmentationMask& mask) {
  if (!(grid == mask.grid())) throw DimensionMismatch("grid does not match mask grid");
  VectorFieldState field(grid, static_cast<int>(keypoints.size()));
  for (int k = 0; k < field.keypoint_count(); ++k) {
    const Vec2& target = keypoints.positions[static_cast<std::size_t>(k)];
    for (int i = 0; i < grid.height; ++i) {
      for (int j = 0; j < grid.width; ++j) {
        if (!mask.at(i, j)) continue;
        const Vec2 offset = target - pixel_coords(i, j);
        const double norm = offset.norm();
        if (norm >= 1e-12) field.at(k, i, j) = offset / norm;
      }
    }
  }
  return field;
}

// Mean squared field error over the mask for keypoint k. Summation runs in
// row-major index order so parallel builders can be checked bit-for-bit.
inline double state_distance(const VectorFieldState& estimate, const VectorFieldState& truth,
                             const SegmentationMask& mask, int k) {
  require_same_shape(estimate, truth);
  require_grid_match(estimate, mask);
  if (mask.count() == 0) throw EmptyMask("state distance over an empty mask");
  if (k < 0 || k >= estimate.keypoint_count()) {
    throw DimensionMismatch("keypoint index out of range");
  }
  double sum = 0.0;
  for (int i = 0; i < estimate.grid().height; ++i) {
    for (int j = 0; j < estimate.grid().width; ++j) {
      if (!mask.at(i, j)) continue;
      sum += (estimate.at(k, i, j) - truth.at(k, i, j)).squaredNorm();
    }
  }
  return sum / static_cast<double>(mask.count());
}

// Arithmetic mean of the per-keypoint state distances.
inline double mean_state_distance(const VectorFieldState& estimate,
                                  const VectorFieldState& truth,
                                  const SegmentationMask& mask) {
  double sum = 0.0;
  for (int k = 0; k < estimate.keypoint_count(); ++k) {
    sum += state_distance(estimate, truth, mask, k);
  }
  return sum / estimate.keypoint_count();
}

}  // namespace ivf
