#include "swarmsim/explore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "swarmsim/errors.hpp"

namespace swarmsim {

void stamp_coverage(CoverageMap& map, const std::vector<FovRectangle>& fovs, int k) {
  if (k < 1) {
    throw ConfigError("coverage time index must be at least 1");
  }
  if (k > 255) {
    throw MissionTimeExhaustedError("coverage time index ran past 255");
  }
  const std::uint8_t stamp = static_cast<std::uint8_t>(k);
  const double res = map.resolution();
  const Vec2 lo = map.grid().min_corner();

  for (const FovRectangle& fov : fovs) {
    const double ext_x = 0.5 * (std::abs(fov.v1.x) * fov.width + std::abs(fov.v2.x) * fov.length);
    const double ext_y = 0.5 * (std::abs(fov.v1.y) * fov.width + std::abs(fov.v2.y) * fov.length);
    const int ix0 = std::max(0, static_cast<int>(std::floor((fov.center.x - ext_x - lo.x) / res)));
    const int iy0 = std::max(0, static_cast<int>(std::floor((fov.center.y - ext_y - lo.y) / res)));
    const int ix1 = std::min(map.size_cells() - 1,
                             static_cast<int>(std::floor((fov.center.x + ext_x - lo.x) / res)));
    const int iy1 = std::min(map.size_cells() - 1,
                             static_cast<int>(std::floor((fov.center.y + ext_y - lo.y) / res)));
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        if (point_in_fov(fov, map.cell_center(ix, iy))) {
          map.set(ix, iy, stamp);
        }
      }
    }
  }
}

double coverage_percentage(const CoverageMap& map) {
  std::size_t seen = 0;
  for (std::uint8_t v : map.grid().cells()) {
    if (v > 0) ++seen;
  }
  return 100.0 * static_cast<double>(seen) / static_cast<double>(map.grid().cells().size());
}

namespace {

// 4-connected flood over cells the map has seen free, from the cell holding
// `start`. The hole ramp brightens a thin band just behind walls, so a plain
// value filter still admits sealed-off ghost cells; connectivity does not.
std::vector<std::uint8_t> reachable_cells(const SlamMap& occupancy, const Vec2& start) {
  const int w = occupancy.size_cells();
  std::vector<std::uint8_t> reachable(static_cast<std::size_t>(w) * w, 0);
  int sx = 0, sy = 0;
  if (!occupancy.cell_of(start, sx, sy) || occupancy.at(sx, sy) <= kSlamUnknown) {
    return reachable;
  }
  std::vector<std::pair<int, int>> stack{{sx, sy}};
  reachable[static_cast<std::size_t>(sy) * w + sx] = 1;
  while (!stack.empty()) {
    const auto [cx, cy] = stack.back();
    stack.pop_back();
    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int n = 0; n < 4; ++n) {
      const int nx = cx + dx[n];
      const int ny = cy + dy[n];
      if (!occupancy.in_bounds(nx, ny)) continue;
      std::uint8_t& seen = reachable[static_cast<std::size_t>(ny) * w + nx];
      if (seen || occupancy.at(nx, ny) <= kSlamUnknown) continue;
      seen = 1;
      stack.emplace_back(nx, ny);
    }
  }
  return reachable;
}

}  // namespace

Vec2 select_target(const CoverageMap& map, double t, const Vec2& camera_center,
                   const TargetState& target, const ExploreParams& params,
                   const SlamMap* occupancy) {
  double best_score = -std::numeric_limits<double>::infinity();
  double best_free_score = -std::numeric_limits<double>::infinity();
  Vec2 best = map.cell_center(0, 0);
  Vec2 best_free = best;
  bool any_free = false;
  std::vector<std::uint8_t> reachable;
  if (occupancy != nullptr) {
    reachable = reachable_cells(*occupancy, camera_center);
  }

  for (int iy = 0; iy < map.size_cells(); ++iy) {
    for (int ix = 0; ix < map.size_cells(); ++ix) {
      const Vec2 y = map.cell_center(ix, iy);
      const double age = t - params.delta_t * static_cast<double>(map.at(ix, iy));
      const double f = std::exp(-params.sigma1 * (y - camera_center).norm() -
                                params.sigma2 * (y - target.previous).norm());
      const double score = age * (params.lambda + (1.0 - params.lambda) * f);
      if (score > best_score) {
        best_score = score;
        best = y;
      }
      if (occupancy != nullptr) {
        int ox = 0, oy = 0;
        if (occupancy->cell_of(y, ox, oy) &&
            reachable[static_cast<std::size_t>(oy) * occupancy->size_cells() + ox] &&
            score > best_free_score) {
          best_free_score = score;
          best_free = y;
          any_free = true;
        }
      }
    }
  }
  return any_free ? best_free : best;
}

Vec2 position_control(const ErrorState& e, const ControlGains& gains) {
  const double n = e.e_c.norm();
  if (n == 0.0) {
    return {};
  }
  const double gate = 1.0 / std::cosh(gains.k_s * e.e_theta);
  return (gains.k_c * gate * gate * std::tanh(gains.k_t * n) / n) * e.e_c;
}

double heading_control(double e_theta, double k_theta) {
  const double denom_sq = 1.0 + std::cos(e_theta);
  if (denom_sq <= 1e-12) {
    // one-sided continuation at the wrap discontinuity
    return e_theta >= 0.0 ? k_theta * std::sqrt(2.0) : -k_theta * std::sqrt(2.0);
  }
  return k_theta * std::sin(e_theta) / std::sqrt(denom_sq);
}

std::optional<double> desired_heading(const Vec2& e_c) {
  if (e_c.x == 0.0 && e_c.y == 0.0) {
    return std::nullopt;
  }
  return std::atan2(e_c.y, e_c.x);
}

ErrorDerivative error_dynamics(const ErrorState& e, double theta_d, const ControlGains& gains,
                               double r_c) {
  if (1.0 + std::cos(e.e_theta) <= 1e-14) {
    throw ExcludedInitialConditionError("error dynamics undefined at e_theta = pi");
  }
  const double g = heading_control(e.e_theta, 1.0);
  const double heading = theta_d - e.e_theta;  // the actual vehicle heading
  const Vec2 b{-std::sin(heading), std::cos(heading)};

  ErrorDerivative d;
  d.e_c_dot = -position_control(e, gains) - (gains.k_theta * r_c * g) * b;
  d.e_theta_dot = -gains.k_theta * g;
  return d;
}

Vec2 avoidance_velocity(const Pose2D& pose, const std::vector<Vec2>& others,
                        const LidarScan& obstacles, double d_safe, double k_rep, Rng& rng) {
  constexpr double kFloorDist = 0.01;
  Vec2 out;
  if (d_safe <= 0.0) {
    return out;
  }
  for (const Vec2& o : others) {
    const Vec2 diff = pose.position - o;
    const double d = diff.norm();
    if (d >= d_safe) {
      continue;
    }
    if (d < kFloorDist) {
      out += k_rep * (1.0 / kFloorDist - 1.0 / d_safe) * rng.unit_vector();
    } else {
      out += k_rep * (1.0 / d - 1.0 / d_safe) * (diff / d);
    }
  }
  for (std::size_t b = 0; b < obstacles.size(); ++b) {
    if (!obstacles.hit_flags[b]) {
      continue;
    }
    const double d = obstacles.ranges[b];
    if (d >= d_safe) {
      continue;
    }
    const Vec2 away = -heading_vector(pose.theta + obstacles.beam_angles[b]);
    out += k_rep * (1.0 / std::max(d, kFloorDist) - 1.0 / d_safe) * away;
  }
  return out;
}

}  // namespace swarmsim
