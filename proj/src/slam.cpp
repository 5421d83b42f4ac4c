#include "swarmsim/slam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmsim/errors.hpp"

namespace swarmsim {

std::uint8_t cell_update(std::uint8_t old_value, int y, int alpha) {
  if (alpha < 0 || alpha > 255) {
    throw ConfigError("cell_update alpha must lie in 0..255");
  }
  if (y < 0 || y > 255) {
    throw ConfigError("cell_update measurement must lie in 0..255");
  }
  const int next = ((255 - alpha) * static_cast<int>(old_value) + alpha * y) / 255;
  return static_cast<std::uint8_t>(next);
}

namespace {

// Walks the grid from start along dir up to t_end, calling
// fn(ix, iy, t_entry, t_exit) for every visited in-bounds cell.
// Stops at the grid border.
template <typename Fn>
void walk_cells(const ByteGrid& grid, const Vec2& start, const Vec2& dir, double t_end, Fn&& fn) {
  int ix = 0, iy = 0;
  if (!grid.cell_of(start, ix, iy)) {
    return;
  }
  const double res = grid.resolution();
  const Vec2 local = start - grid.min_corner();

  const int step_x = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int step_y = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);

  const double inf = std::numeric_limits<double>::infinity();
  double t_max_x = inf, t_delta_x = inf;
  double t_max_y = inf, t_delta_y = inf;
  if (step_x != 0) {
    const double next_x = (step_x > 0 ? (ix + 1) * res : ix * res);
    t_max_x = (next_x - local.x) / dir.x;
    t_delta_x = res / std::abs(dir.x);
  }
  if (step_y != 0) {
    const double next_y = (step_y > 0 ? (iy + 1) * res : iy * res);
    t_max_y = (next_y - local.y) / dir.y;
    t_delta_y = res / std::abs(dir.y);
  }

  double t = 0.0;
  while (t < t_end) {
    const double t_cross = std::min(t_max_x, t_max_y);
    fn(ix, iy, t, std::min(t_cross, t_end));
    if (t_cross >= t_end) {
      return;
    }
    if (t_max_x < t_max_y) {
      t_max_x += t_delta_x;
      ix += step_x;
    } else {
      t_max_y += t_delta_y;
      iy += step_y;
    }
    if (!grid.in_bounds(ix, iy)) {
      return;
    }
    t = t_cross;
  }
}

}  // namespace

void update_map(SlamMap& map, const Pose2D& pose, const LidarScan& scan,
                const SlamParams& params) {
  if (params.hole_width < map.resolution()) {
    throw ConfigError("hole_width must be at least one cell");
  }
  const double hw2 = 0.5 * params.hole_width;

  for (std::size_t b = 0; b < scan.size(); ++b) {
    const double range = scan.ranges[b];
    const bool hit = scan.hit_flags[b] != 0;
    const Vec2 dir = heading_vector(pose.theta + scan.beam_angles[b]);

    bool endpoint_in_map = false;
    if (hit) {
      int ex = 0, ey = 0;
      endpoint_in_map = map.cell_of(pose.position + range * dir, ex, ey);
    }
    const bool grade_hole = hit && endpoint_in_map;
    const double t_end = grade_hole ? range + hw2 : range;

    walk_cells(map.grid(), pose.position, dir, t_end, [&](int ix, int iy, double t0, double t1) {
      int y = 255;
      if (grade_hole && t1 > range - hw2) {
        // distance from the hit endpoint to this cell's swept segment
        double d = 0.0;
        if (range < t0) {
          d = t0 - range;
        } else if (range > t1) {
          d = range - t1;
        }
        y = static_cast<int>(std::lround(255.0 * std::min(1.0, d / hw2)));
      }
      map.set(ix, iy, cell_update(map.at(ix, iy), y, params.alpha));
    });
  }
}

double scan_cost(const SlamMap& map, const LidarScan& scan, const Pose2D& pose) {
  double cost = 0.0;
  for (std::size_t b = 0; b < scan.size(); ++b) {
    if (!scan.hit_flags[b]) {
      continue;
    }
    const Vec2 endpoint =
        pose.position + scan.ranges[b] * heading_vector(pose.theta + scan.beam_angles[b]);
    int ix = 0, iy = 0;
    cost += map.cell_of(endpoint, ix, iy) ? map.at(ix, iy) : 255.0;
  }
  return cost;
}

std::vector<double> endpoint_values(const SlamMap& map, const LidarScan& scan,
                                    const Pose2D& pose) {
  std::vector<double> values(scan.size(), -1.0);
  for (std::size_t b = 0; b < scan.size(); ++b) {
    if (!scan.hit_flags[b]) {
      continue;
    }
    const Vec2 endpoint =
        pose.position + scan.ranges[b] * heading_vector(pose.theta + scan.beam_angles[b]);
    int ix = 0, iy = 0;
    values[b] = map.cell_of(endpoint, ix, iy) ? map.at(ix, iy) : 255.0;
  }
  return values;
}

Pose2D scan_match(const SlamMap& map, const LidarScan& scan, const Pose2D& initial,
                  const ScanMatchParams& params, Rng& rng) {
  // body-frame endpoint offsets are fixed for the scan; each candidate then
  // costs one sincos plus a rotate-and-lookup per beam
  std::vector<Vec2> offsets;
  offsets.reserve(scan.size());
  for (std::size_t b = 0; b < scan.size(); ++b) {
    if (scan.hit_flags[b]) {
      offsets.push_back(scan.ranges[b] * heading_vector(scan.beam_angles[b]));
    }
  }

  const ByteGrid& grid = map.grid();
  const Vec2 lo = grid.min_corner();
  const double inv_res = grid.inv_resolution();
  auto cost_at = [&](const Pose2D& p) {
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    double cost = 0.0;
    for (const Vec2& o : offsets) {
      const double ex = p.position.x + c * o.x - s * o.y;
      const double ey = p.position.y + s * o.x + c * o.y;
      const int ix = static_cast<int>(std::floor((ex - lo.x) * inv_res));
      const int iy = static_cast<int>(std::floor((ey - lo.y) * inv_res));
      cost += grid.in_bounds(ix, iy) ? grid.at(ix, iy) : 255.0;
    }
    return cost;
  };

  Pose2D best = initial;
  double best_cost = cost_at(best);

  for (int i = 0; i < params.iterations; ++i) {
    Pose2D candidate;
    candidate.position.x = best.position.x + rng.normal(0.0, params.sigma_xy);
    candidate.position.y = best.position.y + rng.normal(0.0, params.sigma_xy);
    candidate.theta = wrap_angle(best.theta + rng.normal(0.0, params.sigma_theta));
    if (std::abs(candidate.position.x - initial.position.x) > params.max_offset_xy ||
        std::abs(candidate.position.y - initial.position.y) > params.max_offset_xy ||
        std::abs(wrap_angle(candidate.theta - initial.theta)) > params.max_offset_theta) {
      continue;
    }

    const double c = cost_at(candidate);
    if (c < best_cost) {
      best = candidate;
      best_cost = c;
    }
  }
  return best;
}

Pose2D fuse_poses(const Pose2D& odometry, const Pose2D& matched, double beta) {
  Pose2D fused;
  fused.position = (1.0 - beta) * odometry.position + beta * matched.position;
  fused.theta = wrap_angle(odometry.theta + beta * wrap_angle(matched.theta - odometry.theta));
  return fused;
}

}  // namespace swarmsim
