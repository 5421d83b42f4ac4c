#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "swarmsim/errors.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/world.hpp"

using namespace swarmsim;

namespace {

EnvironmentMap env_from_rows(const std::vector<std::string>& rows, double res = 0.1) {
  std::string text = "resolution=" + std::to_string(res) + "\n";
  for (const auto& r : rows) text += r + "\n";
  std::istringstream in(text);
  return EnvironmentMap::parse(in, "test");
}

EnvironmentMap empty_room(int cells, double res = 0.1) {
  std::vector<std::string> rows;
  rows.push_back(std::string(cells, '#'));
  for (int r = 0; r < cells - 2; ++r) {
    rows.push_back("#" + std::string(cells - 2, '.') + "#");
  }
  rows.push_back(std::string(cells, '#'));
  std::string text = "resolution=" + std::to_string(res) + "\n";
  for (const auto& r : rows) text += r + "\n";
  std::istringstream in(text);
  return EnvironmentMap::parse(in, "room");
}

// slow marching reference for raycast
double march_range(const EnvironmentMap& env, const Vec2& start, double angle, double max_range) {
  const Vec2 dir = heading_vector(angle);
  const double step = env.resolution() / 64.0;
  for (double t = step; t <= max_range; t += step) {
    if (env.occupied_at(start + t * dir)) return t;
  }
  return max_range;
}

}  // namespace

TEST_CASE("scenario parsing validates the grid") {
  const EnvironmentMap env = env_from_rows({"####", "#..#", "#..#", "####"}, 0.5);
  CHECK(env.width_cells() == 4);
  CHECK(env.height_cells() == 4);
  CHECK(env.resolution() == doctest::Approx(0.5));
  CHECK(env.width_m() == doctest::Approx(2.0));
  // text row 1 is the top of the map
  CHECK(env.occupied(0, 0));
  CHECK(!env.occupied(1, 1));
  CHECK(env.boundary_closed());
  CHECK(env.occupied_at({-1.0, 0.2}));  // out of bounds counts occupied
  CHECK(!env.occupied_at({0.75, 0.75}));

  CHECK_THROWS_AS(env_from_rows({"####", "#...", "#..#", "####"}), ConfigError);  // open boundary
  CHECK_THROWS_AS(env_from_rows({"####", "#.#", "####"}), ConfigError);           // ragged
  CHECK_THROWS_AS(env_from_rows({"####", "#x.#", "####", "####"}), ConfigError);  // bad char
  std::istringstream bad_header("res=0.1\n###\n#.#\n###\n");
  CHECK_THROWS_AS(EnvironmentMap::parse(bad_header, "t"), ConfigError);
  std::istringstream bad_res("resolution=-1\n###\n#.#\n###\n");
  CHECK_THROWS_AS(EnvironmentMap::parse(bad_res, "t"), ConfigError);
  CHECK_THROWS_AS(EnvironmentMap::load("does_not_exist.txt"), ConfigError);
}

TEST_CASE("raycast hits the wall face") {
  const EnvironmentMap env = empty_room(100);  // 10 m x 10 m
  const Pose2D pose{{5.0, 5.0}, 0.0};

  const LidarScan scan = raycast(env, pose, {0.0, 0.5 * kPi, kPi, -0.5 * kPi}, 10.0);
  REQUIRE(scan.size() == 4);
  for (std::size_t b = 0; b < 4; ++b) {
    CHECK(scan.hit_flags[b]);
    CHECK(scan.ranges[b] == doctest::Approx(4.9).epsilon(1e-9));  // wall face at 0.1 from border
  }
}

TEST_CASE("raycast reports max_range when nothing is reached") {
  const EnvironmentMap env = empty_room(100);
  const LidarScan scan = raycast(env, {{5.0, 5.0}, 0.0}, {0.0}, 4.0);
  CHECK(!scan.hit_flags[0]);
  CHECK(scan.ranges[0] == doctest::Approx(4.0));
  CHECK(scan.max_range == doctest::Approx(4.0));
}

TEST_CASE("raycast at 45 degrees to the wall normal") {
  const EnvironmentMap env = empty_room(100);
  const Pose2D pose{{8.9, 5.0}, 0.0};  // 1.0 m from the east wall face
  const LidarScan scan = raycast(env, pose, {0.25 * kPi}, 10.0);
  CHECK(scan.hit_flags[0]);
  CHECK(std::abs(scan.ranges[0] - std::sqrt(2.0)) <= env.resolution());
}

TEST_CASE("raycast rejects bad poses") {
  const EnvironmentMap env = empty_room(20);
  CHECK_THROWS_AS(raycast(env, {{0.05, 0.05}, 0.0}, {0.0}, 4.0), InvalidPoseError);  // in wall
  CHECK_THROWS_AS(raycast(env, {{-3.0, 1.0}, 0.0}, {0.0}, 4.0), InvalidPoseError);   // outside
  CHECK_THROWS_AS(raycast(env, {{1.0, 1.0}, 0.0}, {0.0}, -1.0), ConfigError);
}

TEST_CASE("raycast agrees with a fine marching reference") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    EnvironmentMap env = empty_room(60);  // 6 m x 6 m
    for (int i = 0; i < 25; ++i) {
      env.set_occupied(rng.uniform_int(1, 58), rng.uniform_int(1, 58), true);
    }
    Vec2 p;
    do {
      p = {rng.uniform(0.3, 5.7), rng.uniform(0.3, 5.7)};
    } while (env.occupied_at(p));

    std::vector<double> angles;
    for (int b = 0; b < 8; ++b) angles.push_back(rng.uniform(-kPi, kPi));
    const LidarScan scan = raycast(env, {p, 0.0}, angles, 4.0);
    for (std::size_t b = 0; b < angles.size(); ++b) {
      const double ref = march_range(env, p, angles[b], 4.0);
      CHECK(std::abs(scan.ranges[b] - ref) <= env.resolution());
      if (ref < 4.0 - env.resolution()) CHECK(scan.hit_flags[b]);
      if (!scan.hit_flags[b]) CHECK(ref > 4.0 - env.resolution());
    }
  }
}

TEST_CASE("camera_fov basis and center") {
  CameraParams cam;
  cam.r_c = 1.0;
  const FovRectangle f0 = camera_fov({{0.0, 0.0}, 0.0}, cam);
  CHECK(f0.center.x == doctest::Approx(1.0));
  CHECK(f0.center.y == doctest::Approx(0.0));
  CHECK(f0.v1.x == doctest::Approx(1.0));
  CHECK(f0.v2.y == doctest::Approx(1.0));

  const FovRectangle f90 = camera_fov({{0.0, 0.0}, 0.5 * kPi}, cam);
  CHECK(f90.center.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f90.center.y == doctest::Approx(1.0));
  CHECK(f90.v1.y == doctest::Approx(1.0));
  CHECK(f90.v2.x == doctest::Approx(-1.0));

  cam.r_c = std::sqrt(2.0);
  const FovRectangle f45 = camera_fov({{2.0, 3.0}, 0.25 * kPi}, cam);
  CHECK(f45.center.x == doctest::Approx(3.0));
  CHECK(f45.center.y == doctest::Approx(4.0));
}

TEST_CASE("point_in_fov is boundary inclusive") {
  CameraParams cam;
  cam.r_c = 1.0;
  cam.width = 2.0;
  cam.length = 1.0;
  const FovRectangle fov = camera_fov({{0.0, 0.0}, 0.0}, cam);
  CHECK(point_in_fov(fov, fov.center));
  CHECK(point_in_fov(fov, {1.0, 0.5}));    // on the long edge
  CHECK(point_in_fov(fov, {2.0, 0.0}));    // on the short edge
  CHECK(!point_in_fov(fov, {2.1, 0.0}));
  CHECK(!point_in_fov(fov, {1.0, 0.51}));
}

TEST_CASE("point_in_fov is invariant under a common rigid motion") {
  Rng rng(3);
  CameraParams cam;
  cam.r_c = 0.2;
  for (int i = 0; i < 500; ++i) {
    const Pose2D pose{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(-kPi, kPi)};
    const Vec2 y{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const RigidTransform2D T{rng.uniform(-kPi, kPi), {rng.uniform(-4, 4), rng.uniform(-4, 4)}};

    const bool before = point_in_fov(camera_fov(pose, cam), y);
    const bool after = point_in_fov(camera_fov(T.apply(pose), cam), T.apply(y));
    CHECK(before == after);
  }
}

TEST_CASE("step_kinematics saturates and wraps") {
  SaturationLimits lim;  // 0.5 m/s, 1.5 rad/s

  const Pose2D still = step_kinematics({{1.0, 2.0}, 0.3}, {}, 0.0, 0.1, lim);
  CHECK(still.position.x == doctest::Approx(1.0));
  CHECK(still.position.y == doctest::Approx(2.0));
  CHECK(still.theta == doctest::Approx(0.3));

  const Pose2D fast = step_kinematics({{0.0, 0.0}, 0.0}, {10.0, 0.0}, 0.0, 1.0, lim);
  CHECK(fast.position.x == doctest::Approx(0.5));
  CHECK(fast.position.y == doctest::Approx(0.0));

  const Pose2D spun = step_kinematics({{0.0, 0.0}, 3.0}, {}, 0.5, 1.0, lim);
  CHECK(spun.theta == doctest::Approx(3.5 - 2.0 * kPi));

  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Pose2D p{{rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(-kPi, kPi)};
    const Vec2 u{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double w = rng.uniform(-5, 5);
    const double dt = rng.uniform(0.001, 0.5);
    const Pose2D q = step_kinematics(p, u, w, dt, lim);
    CHECK((q.position - p.position).norm() <= lim.s_x * dt + 1e-12);
    CHECK(std::abs(wrap_angle(q.theta - p.theta)) <= lim.s_theta * dt + 1e-12);
    CHECK(q.theta > -kPi);
    CHECK(q.theta <= kPi);
  }
}
