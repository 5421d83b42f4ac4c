#include "swarmsim/grid.hpp"

#include <cmath>

#include "swarmsim/errors.hpp"

namespace swarmsim {

ByteGrid::ByteGrid(int width_cells, int height_cells, double resolution, Vec2 origin,
                   std::uint8_t init_value)
    : width_(width_cells),
      height_(height_cells),
      resolution_(resolution),
      inv_resolution_(1.0 / resolution),
      origin_(origin) {
  if (width_cells <= 0 || height_cells <= 0) {
    throw ConfigError("grid dimensions must be positive");
  }
  if (resolution <= 0.0) {
    throw ConfigError("grid resolution must be positive");
  }
  min_corner_ = {origin.x - 0.5 * width_ * resolution_, origin.y - 0.5 * height_ * resolution_};
  cells_.assign(static_cast<std::size_t>(width_) * height_, init_value);
}

bool ByteGrid::cell_of(const Vec2& p, int& ix, int& iy) const {
  // multiplication by the cached inverse, so hot paths that inline the same
  // lookup stay bit-consistent with this one
  ix = static_cast<int>(std::floor((p.x - min_corner_.x) * inv_resolution_));
  iy = static_cast<int>(std::floor((p.y - min_corner_.y) * inv_resolution_));
  return in_bounds(ix, iy);
}

}  // namespace swarmsim
