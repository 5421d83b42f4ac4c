#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "swarmsim/errors.hpp"
#include "swarmsim/explore.hpp"

using namespace swarmsim;

namespace {

FovRectangle axis_fov(Vec2 center, double width, double length) {
  return {center, {1.0, 0.0}, {0.0, 1.0}, width, length};
}

int count_stamped(const CoverageMap& map, int k) {
  int n = 0;
  for (int iy = 0; iy < map.size_cells(); ++iy) {
    for (int ix = 0; ix < map.size_cells(); ++ix) {
      if (map.at(ix, iy) == k) ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("stamp_coverage marks exactly the cells inside a footprint") {
  CoverageMap map(100, 0.1, {0.0, 0.0});
  const FovRectangle fov = axis_fov({0.0, 0.0}, 2.0, 1.0);
  stamp_coverage(map, {fov}, 5);

  for (int iy = 0; iy < map.size_cells(); ++iy) {
    for (int ix = 0; ix < map.size_cells(); ++ix) {
      const bool inside = point_in_fov(fov, map.cell_center(ix, iy));
      CHECK(map.at(ix, iy) == (inside ? 5 : 0));
    }
  }
  // 2 m x 1 m footprint at 0.1 m cells, boundary-inclusive centers
  CHECK(count_stamped(map, 5) == 200);
}

TEST_CASE("stamp_coverage handles rotated footprints and unions") {
  CoverageMap map(100, 0.1, {0.0, 0.0});
  const CameraParams cam;
  const FovRectangle a = camera_fov({{0.0, 0.0}, kPi / 4.0}, cam);
  const FovRectangle b = camera_fov({{1.5, -1.0}, -kPi / 3.0}, cam);
  stamp_coverage(map, {a, b}, 9);

  for (int iy = 0; iy < map.size_cells(); ++iy) {
    for (int ix = 0; ix < map.size_cells(); ++ix) {
      const Vec2 c = map.cell_center(ix, iy);
      const bool inside = point_in_fov(a, c) || point_in_fov(b, c);
      CHECK(map.at(ix, iy) == (inside ? 9 : 0));
    }
  }
}

TEST_CASE("stamp_coverage keeps the latest time index") {
  CoverageMap map(100, 0.1, {0.0, 0.0});
  stamp_coverage(map, {axis_fov({-2.0, 0.0}, 1.0, 1.0)}, 3);
  stamp_coverage(map, {axis_fov({-2.0, 0.0}, 1.0, 1.0)}, 3);  // idempotent
  CHECK(count_stamped(map, 3) == 100);

  stamp_coverage(map, {axis_fov({-1.8, 0.0}, 1.0, 1.0)}, 7);
  int ix = 0, iy = 0;
  REQUIRE(map.cell_of({-2.4, 0.0}, ix, iy));
  CHECK(map.at(ix, iy) == 3);  // only the first footprint saw this cell
  REQUIRE(map.cell_of({-1.8, 0.0}, ix, iy));
  CHECK(map.at(ix, iy) == 7);  // overlap takes the newer stamp
}

TEST_CASE("stamp_coverage validates the time index") {
  CoverageMap map(10, 0.1, {0.0, 0.0});
  const std::vector<FovRectangle> fovs = {axis_fov({0.0, 0.0}, 0.4, 0.4)};
  CHECK_THROWS_AS(stamp_coverage(map, fovs, 0), ConfigError);
  CHECK_THROWS_AS(stamp_coverage(map, fovs, -2), ConfigError);
  CHECK_THROWS_AS(stamp_coverage(map, fovs, 256), MissionTimeExhaustedError);
  CHECK_NOTHROW(stamp_coverage(map, fovs, 255));
}

TEST_CASE("coverage_percentage counts seen cells") {
  CoverageMap map(100, 0.1, {0.0, 0.0});
  CHECK(coverage_percentage(map) == doctest::Approx(0.0));

  for (int iy = 0; iy < 50; ++iy) {
    for (int ix = 0; ix < 50; ++ix) map.set(ix, iy, 12);
  }
  CHECK(coverage_percentage(map) == doctest::Approx(25.0));

  for (int iy = 0; iy < 100; ++iy) {
    for (int ix = 0; ix < 100; ++ix) map.set(ix, iy, 1);
  }
  CHECK(coverage_percentage(map) == doctest::Approx(100.0));
}

TEST_CASE("select_target scores staleness against proximity") {
  CoverageMap map(100, 0.1, {0.0, 0.0});
  ExploreParams params;
  const TargetState none{{0.0, 0.0}, {0.0, 0.0}, 0.0};

  SUBCASE("uniform scores break ties toward the first cell") {
    params.lambda = 1.0;
    const Vec2 y = select_target(map, 10.0, {1.0, 1.0}, none, params);
    CHECK(y.x == map.cell_center(0, 0).x);
    CHECK(y.y == map.cell_center(0, 0).y);
  }

  SUBCASE("pure staleness picks the oldest stamp") {
    params.lambda = 1.0;
    for (int iy = 0; iy < 100; ++iy) {
      for (int ix = 0; ix < 100; ++ix) map.set(ix, iy, 200);
    }
    map.set(37, 12, 1);
    const Vec2 y = select_target(map, 255.0, {3.0, -3.0}, none, params);
    CHECK(y.x == doctest::Approx(map.cell_center(37, 12).x));
    CHECK(y.y == doctest::Approx(map.cell_center(37, 12).y));
  }

  SUBCASE("pure staleness is independent of the observer") {
    params.lambda = 1.0;
    CoverageMap shared(100, 0.1, {0.0, 0.0});
    Rng rng(400);
    for (int iy = 0; iy < 100; ++iy) {
      for (int ix = 0; ix < 100; ++ix) {
        shared.set(ix, iy, static_cast<std::uint8_t>(rng.uniform_int(0, 200)));
      }
    }
    const Vec2 a = select_target(shared, 250.0, {-4.0, -4.0}, none, params);
    const Vec2 b = select_target(shared, 250.0, {0.0, 4.0}, none, params);
    const Vec2 c = select_target(shared, 250.0, {4.4, -1.2}, none, params);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.x == c.x);
    CHECK(a.y == c.y);
  }

  SUBCASE("pure proximity picks the nearest cell") {
    params.lambda = 0.0;
    const Vec2 here = map.cell_center(60, 40);
    const TargetState at_here{here, here, 0.0};
    const Vec2 y = select_target(map, 10.0, here, at_here, params);
    CHECK(y.x == doctest::Approx(here.x));
    CHECK(y.y == doctest::Approx(here.y));
  }
}

TEST_CASE("select_target respects the occupancy filter") {
  CoverageMap map(100, 0.1, {0.0, 0.0});
  ExploreParams params;
  params.lambda = 1.0;
  const TargetState none{{0.0, 0.0}, {0.0, 0.0}, 0.0};

  SlamMap occ(100, 0.1, {0.0, 0.0});
  // two free pockets with no free path between them
  for (int iy = 10; iy <= 40; ++iy) {
    for (int ix = 10; ix <= 40; ++ix) occ.set(ix, iy, 255);
  }
  for (int iy = 60; iy <= 90; ++iy) {
    for (int ix = 60; ix <= 90; ++ix) occ.set(ix, iy, 255);
  }
  const Vec2 in_a = occ.cell_center(25, 25);

  SUBCASE("an unreachable stale pocket is passed over") {
    for (int iy = 0; iy < 100; ++iy) {
      for (int ix = 0; ix < 100; ++ix) {
        const bool in_b = ix >= 60 && ix <= 90 && iy >= 60 && iy <= 90;
        map.set(ix, iy, in_b ? 0 : 200);
      }
    }
    const Vec2 unfiltered = select_target(map, 255.0, in_a, none, params, nullptr);
    CHECK(unfiltered.x == doctest::Approx(map.cell_center(60, 60).x));
    CHECK(unfiltered.y == doctest::Approx(map.cell_center(60, 60).y));

    const Vec2 filtered = select_target(map, 255.0, in_a, none, params, &occ);
    CHECK(filtered.x == doctest::Approx(map.cell_center(10, 10).x));
    CHECK(filtered.y == doctest::Approx(map.cell_center(10, 10).y));
  }

  SUBCASE("a fully unknown map drops the filter") {
    SlamMap unknown(100, 0.1, {0.0, 0.0});
    const Vec2 with = select_target(map, 10.0, in_a, none, params, &unknown);
    const Vec2 without = select_target(map, 10.0, in_a, none, params, nullptr);
    CHECK(with.x == without.x);
    CHECK(with.y == without.y);
  }

  SUBCASE("an observer on an unknown cell drops the filter") {
    const Vec2 outside{0.0, 0.0};  // cell (50, 50), never seen free
    const Vec2 with = select_target(map, 10.0, outside, none, params, &occ);
    const Vec2 without = select_target(map, 10.0, outside, none, params, nullptr);
    CHECK(with.x == without.x);
    CHECK(with.y == without.y);
  }
}

TEST_CASE("position_control saturates and gates on heading error") {
  const ControlGains gains;

  SUBCASE("zero error commands zero") {
    const Vec2 u = position_control({{0.0, 0.0}, 1.0}, gains);
    CHECK(u.x == 0.0);
    CHECK(u.y == 0.0);
  }

  SUBCASE("aligned pull along the error") {
    const Vec2 u = position_control({{2.0, 0.0}, 0.0}, gains);
    CHECK(u.x == doctest::Approx(0.5 * std::tanh(2.0)));
    CHECK(u.y == doctest::Approx(0.0));
  }

  SUBCASE("heading error closes the gate") {
    // sech^2(2 * 1.5) = 0.00986603716544019
    const Vec2 u = position_control({{10.0, 0.0}, 1.5}, gains);
    CHECK(u.x == doctest::Approx(0.5 * 0.00986603716544019 * std::tanh(10.0)));
    CHECK(u.y == doctest::Approx(0.0));
  }

  SUBCASE("never exceeds k_c and stays parallel to the error") {
    Rng rng(500);
    for (int i = 0; i < 500; ++i) {
      const ErrorState e{{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)},
                         rng.uniform(-3.0, 3.0)};
      const Vec2 u = position_control(e, gains);
      CHECK(u.norm() <= gains.k_c + 1e-12);
      CHECK(std::abs(u.x * e.e_c.y - u.y * e.e_c.x) < 1e-9);
      CHECK(u.dot(e.e_c) >= 0.0);
    }
  }
}

TEST_CASE("heading_control follows the half-angle form") {
  CHECK(heading_control(0.0, 1.0) == doctest::Approx(0.0));
  CHECK(heading_control(kPi / 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(heading_control(0.9 * kPi, 1.0) == doctest::Approx(1.3968022466674204));
  CHECK(heading_control(kPi, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(heading_control(-kPi, 1.0) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(heading_control(kPi / 2.0, 2.5) == doctest::Approx(2.5));

  Rng rng(501);
  for (int i = 0; i < 1000; ++i) {
    const double e = rng.uniform(-kPi + 1e-6, kPi - 1e-6);
    const double h = heading_control(e, 1.0);
    CHECK(h == doctest::Approx(std::sqrt(2.0) * std::sin(e / 2.0)).epsilon(1e-9));
    CHECK(h * e >= 0.0);
    CHECK(heading_control(-e, 1.0) == doctest::Approx(-h));
  }
}

TEST_CASE("desired_heading is the error bearing") {
  CHECK(desired_heading({1.0, 0.0}).value() == doctest::Approx(0.0));
  CHECK(desired_heading({0.0, 2.0}).value() == doctest::Approx(kPi / 2.0));
  CHECK(desired_heading({-1.0, 0.0}).value() == doctest::Approx(kPi));
  CHECK(desired_heading({1e-300, 0.0}).has_value());
  CHECK_FALSE(desired_heading({0.0, 0.0}).has_value());
}

TEST_CASE("error_dynamics couples position and heading loops") {
  const ControlGains gains;
  const double r_c = 0.2;

  SUBCASE("the origin is an equilibrium") {
    const ErrorDerivative d = error_dynamics({{0.0, 0.0}, 0.0}, 0.3, gains, r_c);
    CHECK(d.e_c_dot.norm() == doctest::Approx(0.0));
    CHECK(d.e_theta_dot == doctest::Approx(0.0));
  }

  SUBCASE("the heading loop ignores the position error") {
    const double e_theta = kPi / 2.0;
    const ErrorDerivative a = error_dynamics({{0.0, 0.0}, e_theta}, 0.0, gains, r_c);
    const ErrorDerivative b = error_dynamics({{3.0, -4.0}, e_theta}, 0.0, gains, r_c);
    CHECK(a.e_theta_dot == doctest::Approx(b.e_theta_dot));
    CHECK(a.e_theta_dot == doctest::Approx(-gains.k_theta * heading_control(e_theta, 1.0)));
  }

  SUBCASE("aligned heading removes the coupling term") {
    const ErrorState e{{1.0, 2.0}, 0.0};
    const ErrorDerivative d = error_dynamics(e, 0.7, gains, r_c);
    const Vec2 pc = position_control(e, gains);
    CHECK((d.e_c_dot + pc).norm() == doctest::Approx(0.0));
    CHECK(d.e_theta_dot == doctest::Approx(0.0));
  }

  SUBCASE("a quarter-turn error drags the center sideways") {
    const ErrorDerivative d = error_dynamics({{0.0, 0.0}, kPi / 2.0}, 0.0, gains, r_c);
    // heading = -pi/2, so the body axis b points along +x
    CHECK(d.e_c_dot.x == doctest::Approx(-gains.k_theta * r_c));
    CHECK(d.e_c_dot.y == doctest::Approx(0.0));
    CHECK(d.e_theta_dot == doctest::Approx(-1.0));
  }

  SUBCASE("the coupling magnitude is k_theta r_c g") {
    Rng rng(502);
    for (int i = 0; i < 200; ++i) {
      const ErrorState e{{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)},
                         rng.uniform(-3.0, 3.0)};
      const double theta_d = rng.uniform(-kPi, kPi);
      const ErrorDerivative d = error_dynamics(e, theta_d, gains, r_c);
      const double g = heading_control(e.e_theta, 1.0);
      CHECK((d.e_c_dot + position_control(e, gains)).norm() ==
            doctest::Approx(std::abs(gains.k_theta * r_c * g)).epsilon(1e-9));
    }
  }

  SUBCASE("the antipodal heading error is excluded") {
    CHECK_THROWS_AS(error_dynamics({{1.0, 0.0}, kPi}, 0.0, gains, r_c),
                    ExcludedInitialConditionError);
    CHECK_NOTHROW(error_dynamics({{1.0, 0.0}, kPi - 1e-3}, 0.0, gains, r_c));
  }
}

TEST_CASE("avoidance_velocity repels from neighbors and scan returns") {
  Rng rng(503);
  const double d_safe = 0.5;
  const double k_rep = 0.1;
  LidarScan no_scan;
  no_scan.max_range = 4.0;

  SUBCASE("clear surroundings command nothing") {
    const Vec2 u = avoidance_velocity({{0.0, 0.0}, 0.0}, {}, no_scan, d_safe, k_rep, rng);
    CHECK(u.norm() == doctest::Approx(0.0));
  }

  SUBCASE("neighbors at or beyond d_safe are ignored") {
    const Vec2 u = avoidance_velocity({{0.0, 0.0}, 0.0}, {{0.5, 0.0}, {0.0, -0.9}}, no_scan,
                                      d_safe, k_rep, rng);
    CHECK(u.norm() == doctest::Approx(0.0));
  }

  SUBCASE("a close neighbor pushes directly away") {
    const Vec2 u =
        avoidance_velocity({{0.0, 0.0}, 0.0}, {{0.25, 0.0}}, no_scan, d_safe, k_rep, rng);
    CHECK(u.x == doctest::Approx(-0.2));
    CHECK(u.y == doctest::Approx(0.0));
  }

  SUBCASE("opposing neighbors cancel") {
    const Vec2 u = avoidance_velocity({{0.0, 0.0}, 0.0}, {{0.25, 0.0}, {-0.25, 0.0}}, no_scan,
                                      d_safe, k_rep, rng);
    CHECK(u.norm() == doctest::Approx(0.0));
  }

  SUBCASE("the push grows as the neighbor closes in") {
    double last = 0.0;
    for (double d : {0.45, 0.3, 0.15, 0.05}) {
      const Vec2 u =
          avoidance_velocity({{0.0, 0.0}, 0.0}, {{d, 0.0}}, no_scan, d_safe, k_rep, rng);
      CHECK(u.norm() > last);
      last = u.norm();
    }
  }

  SUBCASE("a scan return ahead pushes backward in the body frame") {
    LidarScan scan;
    scan.beam_angles = {0.0};
    scan.ranges = {0.25};
    scan.hit_flags = {1};
    scan.max_range = 4.0;
    const Vec2 u =
        avoidance_velocity({{1.0, 1.0}, kPi / 2.0}, {}, scan, d_safe, k_rep, rng);
    CHECK(u.x == doctest::Approx(0.0));
    CHECK(u.y == doctest::Approx(-0.2));
  }

  SUBCASE("misses never repel") {
    LidarScan scan;
    scan.beam_angles = {0.0};
    scan.ranges = {0.1};
    scan.hit_flags = {0};
    scan.max_range = 4.0;
    const Vec2 u = avoidance_velocity({{0.0, 0.0}, 0.0}, {}, scan, d_safe, k_rep, rng);
    CHECK(u.norm() == doctest::Approx(0.0));
  }

  SUBCASE("a coincident neighbor repels at the floor distance") {
    const Vec2 u =
        avoidance_velocity({{2.0, 2.0}, 0.0}, {{2.0, 2.0}}, no_scan, d_safe, k_rep, rng);
    CHECK(u.norm() == doctest::Approx(k_rep * (1.0 / 0.01 - 1.0 / d_safe)));
  }

  SUBCASE("a nonpositive radius disables the field") {
    const Vec2 u =
        avoidance_velocity({{0.0, 0.0}, 0.0}, {{0.1, 0.0}}, no_scan, 0.0, k_rep, rng);
    CHECK(u.norm() == doctest::Approx(0.0));
  }
}
