#pragma once

#include <cstdint>
#include <vector>

#include "swarmsim/grid.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/world.hpp"

namespace swarmsim {

inline constexpr std::uint8_t kSlamUnknown = 127;

// Occupancy map: 0 = occupied, 255 = free, 127 = unknown.
class SlamMap {
 public:
  explicit SlamMap(int size_cells = 100, double resolution = 0.1, Vec2 origin = {})
      : grid_(size_cells, size_cells, resolution, origin, kSlamUnknown) {}

  int size_cells() const { return grid_.width_cells(); }
  double resolution() const { return grid_.resolution(); }
  Vec2 origin() const { return grid_.origin(); }

  std::uint8_t at(int ix, int iy) const { return grid_.at(ix, iy); }
  void set(int ix, int iy, std::uint8_t v) { grid_.set(ix, iy, v); }
  bool in_bounds(int ix, int iy) const { return grid_.in_bounds(ix, iy); }
  bool cell_of(const Vec2& p, int& ix, int& iy) const { return grid_.cell_of(p, ix, iy); }
  Vec2 cell_center(int ix, int iy) const { return grid_.cell_center(ix, iy); }
  const ByteGrid& grid() const { return grid_; }

  bool operator==(const SlamMap& o) const = default;

 private:
  ByteGrid grid_;
};

struct SlamParams {
  int alpha = 100;             // update weight, 0..255
  double hole_width = 0.4;     // obstacle blur length along the beam, meters
  double quality_threshold = 600.0;  // max accepted match cost in the mission loop
};

struct ScanMatchParams {
  int iterations = 1000;
  double sigma_xy = 0.05;                  // meters
  double sigma_theta = 2.0 * kPi / 180.0;  // radians
  // trust region around the starting pose; candidates beyond it are skipped.
  // With a handful of beams the cost surface has distant spurious zeros, and
  // an unbounded descent chain can wander into them.
  double max_offset_xy = 0.15;                 // meters
  double max_offset_theta = 6.0 * kPi / 180.0;  // radians
};

// One exponential-filter step of a cell toward measurement y, integer floor
// arithmetic: (255 - alpha) * old / 255 weighted against alpha * y / 255.
std::uint8_t cell_update(std::uint8_t old_value, int y, int alpha);

// Writes one scan into the map from the given pose (map frame). Beam lines
// are swept cell by cell: free space gets y = 255, and cells within
// hole_width/2 of a hit endpoint get a value ramping linearly from 0 at the
// endpoint back up to 255. Beams whose endpoint leaves the map are truncated
// at the border and only sweep free space.
void update_map(SlamMap& map, const Pose2D& pose, const LidarScan& scan,
                const SlamParams& params);

// Sum of map values at the transformed hit endpoints; off-map endpoints
// count 255. Lower is better, 0 is a perfect fit.
double scan_cost(const SlamMap& map, const LidarScan& scan, const Pose2D& pose);

// Per-beam endpoint map values at a pose, same lookup convention as
// scan_cost; missed beams report -1, off-map endpoints 255.
std::vector<double> endpoint_values(const SlamMap& map, const LidarScan& scan,
                                    const Pose2D& pose);

// Monte Carlo matcher: random-walk around the best pose so far, keeping a
// perturbation only when the cost strictly decreases.
Pose2D scan_match(const SlamMap& map, const LidarScan& scan, const Pose2D& initial,
                  const ScanMatchParams& params, Rng& rng);

// complementary blend of odometry and matched pose, heading along shortest arc
Pose2D fuse_poses(const Pose2D& odometry, const Pose2D& matched, double beta);

}  // namespace swarmsim
