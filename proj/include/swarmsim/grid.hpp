#pragma once

#include <cstdint>
#include <vector>

#include "swarmsim/geometry.hpp"

namespace swarmsim {

// Shared byte-grid plumbing for the local (per-agent) maps. The grid is
// centered on `origin`; iy grows with the frame's y axis.
class ByteGrid {
 public:
  ByteGrid(int width_cells, int height_cells, double resolution, Vec2 origin,
           std::uint8_t init_value);

  int width_cells() const { return width_; }
  int height_cells() const { return height_; }
  double resolution() const { return resolution_; }
  double inv_resolution() const { return inv_resolution_; }
  Vec2 origin() const { return origin_; }

  std::uint8_t at(int ix, int iy) const { return cells_[idx(ix, iy)]; }
  void set(int ix, int iy, std::uint8_t v) { cells_[idx(ix, iy)] = v; }

  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < width_ && iy >= 0 && iy < height_;
  }
  // false when p lies outside the grid
  bool cell_of(const Vec2& p, int& ix, int& iy) const;
  Vec2 cell_center(int ix, int iy) const {
    return {min_corner_.x + (ix + 0.5) * resolution_, min_corner_.y + (iy + 0.5) * resolution_};
  }
  Vec2 min_corner() const { return min_corner_; }

  const std::vector<std::uint8_t>& cells() const { return cells_; }
  std::vector<std::uint8_t>& cells() { return cells_; }

  bool operator==(const ByteGrid& o) const = default;

 private:
  int idx(int ix, int iy) const { return iy * width_ + ix; }

  int width_;
  int height_;
  double resolution_;
  double inv_resolution_;
  Vec2 origin_;
  Vec2 min_corner_;
  std::vector<std::uint8_t> cells_;
};

}  // namespace swarmsim
