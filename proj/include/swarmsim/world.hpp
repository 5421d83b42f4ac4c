#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swarmsim/geometry.hpp"

namespace swarmsim {

// Static occupancy grid for the true environment. Cell (ix, iy) spans
// [ix*res, (ix+1)*res) x [iy*res, (iy+1)*res) with the origin at the
// lower-left corner; iy grows with world y.
class EnvironmentMap {
 public:
  EnvironmentMap(int width_cells, int height_cells, double resolution);

  // ASCII scenario: first line "resolution=<m>", then '#'/'.' rows,
  // first grid line = top row. Requires a fully occupied boundary.
  static EnvironmentMap load(const std::string& path);
  static EnvironmentMap parse(std::istream& in, const std::string& name);

  int width_cells() const { return width_; }
  int height_cells() const { return height_; }
  double resolution() const { return resolution_; }
  double width_m() const { return width_ * resolution_; }
  double height_m() const { return height_ * resolution_; }

  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < width_ && iy >= 0 && iy < height_;
  }
  bool occupied(int ix, int iy) const { return cells_[idx(ix, iy)] != 0; }
  void set_occupied(int ix, int iy, bool value) { cells_[idx(ix, iy)] = value ? 1 : 0; }

  bool contains(const Vec2& p) const;
  // true when p falls in an occupied cell; out-of-bounds counts as occupied
  bool occupied_at(const Vec2& p) const;
  void cell_of(const Vec2& p, int& ix, int& iy) const;
  Vec2 cell_center(int ix, int iy) const {
    return {(ix + 0.5) * resolution_, (iy + 0.5) * resolution_};
  }

  bool boundary_closed() const;

 private:
  int idx(int ix, int iy) const { return iy * width_ + ix; }

  int width_;
  int height_;
  double resolution_;
  std::vector<std::uint8_t> cells_;
};

struct LidarScan {
  std::vector<double> beam_angles;  // radians, relative to body heading
  std::vector<double> ranges;      // meters, max_range where no hit
  std::vector<std::uint8_t> hit_flags;
  double max_range = 0.0;

  std::size_t size() const { return beam_angles.size(); }
};

struct CameraParams {
  double r_c = 0.2;  // forward offset of the footprint center
  double width = 1.0;   // extent along the heading axis
  double length = 1.0;  // extent across the heading axis
};

struct FovRectangle {
  Vec2 center;
  Vec2 v1;  // unit, along heading
  Vec2 v2;  // unit, across heading
  double width = 0.0;
  double length = 0.0;
};

struct SaturationLimits {
  double s_x = 0.5;      // max linear speed, m/s
  double s_theta = 1.5;  // max yaw rate, rad/s
};

// Grid-walk raycast from the pose through each beam angle (body-relative).
// Range is the distance to the entry face of the first occupied cell,
// max_range when nothing is hit within reach. Throws InvalidPoseError if the
// pose lies outside the map or inside an occupied cell.
LidarScan raycast(const EnvironmentMap& env, const Pose2D& pose,
                  const std::vector<double>& beam_angles, double max_range);

FovRectangle camera_fov(const Pose2D& pose, const CameraParams& cam);

// boundary-inclusive point-in-rectangle test
bool point_in_fov(const FovRectangle& fov, const Vec2& y);

// Saturates the commands (direction-preserving clamp of u_x to s_x, clamp of
// u_theta to [-s_theta, s_theta]), then one forward-Euler step; theta wrapped.
Pose2D step_kinematics(const Pose2D& pose, const Vec2& u_x, double u_theta, double dt,
                       const SaturationLimits& limits);

}  // namespace swarmsim
