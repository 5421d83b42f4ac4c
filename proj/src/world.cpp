#include "swarmsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "swarmsim/errors.hpp"

namespace swarmsim {

EnvironmentMap::EnvironmentMap(int width_cells, int height_cells, double resolution)
    : width_(width_cells), height_(height_cells), resolution_(resolution) {
  if (width_cells < 3 || height_cells < 3) {
    throw ConfigError("environment must be at least 3x3 cells");
  }
  if (resolution <= 0.0) {
    throw ConfigError("environment resolution must be positive");
  }
  cells_.assign(static_cast<std::size_t>(width_) * height_, 0);
}

EnvironmentMap EnvironmentMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open scenario file: " + path);
  }
  return parse(in, path);
}

EnvironmentMap EnvironmentMap::parse(std::istream& in, const std::string& name) {
  std::string header;
  if (!std::getline(in, header)) {
    throw ConfigError(name + ": empty scenario file");
  }
  // tolerate spaces around '='
  const auto eq = header.find('=');
  std::string key = header.substr(0, eq == std::string::npos ? header.size() : eq);
  key.erase(std::remove_if(key.begin(), key.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
            key.end());
  if (eq == std::string::npos || key != "resolution") {
    throw ConfigError(name + ": first line must be 'resolution=<meters>'");
  }
  double resolution = 0.0;
  try {
    resolution = std::stod(header.substr(eq + 1));
  } catch (const std::exception&) {
    throw ConfigError(name + ": bad resolution value");
  }
  if (resolution <= 0.0) {
    throw ConfigError(name + ": resolution must be positive");
  }

  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.size() < 3) {
    throw ConfigError(name + ": scenario needs at least 3 grid rows");
  }
  const std::size_t width = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw ConfigError(name + ": ragged grid row " + std::to_string(r + 1));
    }
    for (char c : rows[r]) {
      if (c != '#' && c != '.') {
        throw ConfigError(name + ": grid characters must be '#' or '.'");
      }
    }
  }

  EnvironmentMap env(static_cast<int>(width), static_cast<int>(rows.size()), resolution);
  // first text row is the top of the world
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int iy = static_cast<int>(rows.size() - 1 - r);
    for (std::size_t c = 0; c < width; ++c) {
      env.set_occupied(static_cast<int>(c), iy, rows[r][c] == '#');
    }
  }
  if (!env.boundary_closed()) {
    throw ConfigError(name + ": scenario boundary must be fully occupied");
  }
  return env;
}

bool EnvironmentMap::contains(const Vec2& p) const {
  return p.x >= 0.0 && p.x < width_m() && p.y >= 0.0 && p.y < height_m();
}

bool EnvironmentMap::occupied_at(const Vec2& p) const {
  if (!contains(p)) return true;
  int ix = 0, iy = 0;
  cell_of(p, ix, iy);
  return occupied(ix, iy);
}

void EnvironmentMap::cell_of(const Vec2& p, int& ix, int& iy) const {
  ix = std::clamp(static_cast<int>(std::floor(p.x / resolution_)), 0, width_ - 1);
  iy = std::clamp(static_cast<int>(std::floor(p.y / resolution_)), 0, height_ - 1);
}

bool EnvironmentMap::boundary_closed() const {
  for (int ix = 0; ix < width_; ++ix) {
    if (!occupied(ix, 0) || !occupied(ix, height_ - 1)) return false;
  }
  for (int iy = 0; iy < height_; ++iy) {
    if (!occupied(0, iy) || !occupied(width_ - 1, iy)) return false;
  }
  return true;
}

namespace {

// single-beam grid walk, returns entry distance into the first occupied cell
double cast_beam(const EnvironmentMap& env, const Vec2& origin, double angle, double max_range,
                 bool& hit) {
  const Vec2 dir = heading_vector(angle);
  const double res = env.resolution();

  int ix = 0, iy = 0;
  env.cell_of(origin, ix, iy);

  const int step_x = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int step_y = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);

  const double inf = std::numeric_limits<double>::infinity();
  double t_max_x = inf, t_delta_x = inf;
  double t_max_y = inf, t_delta_y = inf;
  if (step_x != 0) {
    const double next_x = (step_x > 0 ? (ix + 1) * res : ix * res);
    t_max_x = (next_x - origin.x) / dir.x;
    t_delta_x = res / std::abs(dir.x);
  }
  if (step_y != 0) {
    const double next_y = (step_y > 0 ? (iy + 1) * res : iy * res);
    t_max_y = (next_y - origin.y) / dir.y;
    t_delta_y = res / std::abs(dir.y);
  }

  hit = false;
  while (true) {
    double t_cross = 0.0;
    if (t_max_x < t_max_y) {
      t_cross = t_max_x;
      t_max_x += t_delta_x;
      ix += step_x;
    } else {
      t_cross = t_max_y;
      t_max_y += t_delta_y;
      iy += step_y;
    }
    if (t_cross >= max_range) {
      return max_range;
    }
    if (!env.in_bounds(ix, iy) || env.occupied(ix, iy)) {
      hit = true;
      return t_cross;
    }
  }
}

}  // namespace

LidarScan raycast(const EnvironmentMap& env, const Pose2D& pose,
                  const std::vector<double>& beam_angles, double max_range) {
  if (max_range <= 0.0) {
    throw ConfigError("raycast max_range must be positive");
  }
  if (!env.contains(pose.position)) {
    throw InvalidPoseError("raycast pose lies outside the environment");
  }
  if (env.occupied_at(pose.position)) {
    throw InvalidPoseError("raycast pose lies inside an occupied cell");
  }

  LidarScan scan;
  scan.beam_angles = beam_angles;
  scan.max_range = max_range;
  scan.ranges.reserve(beam_angles.size());
  scan.hit_flags.reserve(beam_angles.size());
  for (double beam : beam_angles) {
    bool hit = false;
    const double r = cast_beam(env, pose.position, pose.theta + beam, max_range, hit);
    scan.ranges.push_back(r);
    scan.hit_flags.push_back(hit ? 1 : 0);
  }
  return scan;
}

FovRectangle camera_fov(const Pose2D& pose, const CameraParams& cam) {
  FovRectangle fov;
  fov.v1 = heading_vector(pose.theta);
  fov.v2 = {-fov.v1.y, fov.v1.x};
  fov.center = pose.position + cam.r_c * fov.v1;
  fov.width = cam.width;
  fov.length = cam.length;
  return fov;
}

bool point_in_fov(const FovRectangle& fov, const Vec2& y) {
  const Vec2 d = y - fov.center;
  return std::abs(d.dot(fov.v1)) <= 0.5 * fov.width && std::abs(d.dot(fov.v2)) <= 0.5 * fov.length;
}

Pose2D step_kinematics(const Pose2D& pose, const Vec2& u_x, double u_theta, double dt,
                       const SaturationLimits& limits) {
  Vec2 u = u_x;
  const double speed = u.norm();
  if (speed > limits.s_x && speed > 0.0) {
    u = u * (limits.s_x / speed);
  }
  const double w = std::clamp(u_theta, -limits.s_theta, limits.s_theta);

  Pose2D next;
  next.position = pose.position + dt * u;
  next.theta = wrap_angle(pose.theta + dt * w);
  return next;
}

}  // namespace swarmsim
