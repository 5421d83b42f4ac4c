#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <optional>
#include <string>

#include "swarmsim/config.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/io.hpp"

using namespace swarmsim;

namespace {

bool parse_fails_with(const std::string& text, const std::string& needle,
                      const std::string& name = "test.cfg") {
  try {
    parse_config_text(text, name);
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("the baked-in defaults parse to the documented values") {
  const SimConfig cfg = parse_config_text(default_config_text(), "<defaults>");

  CHECK(cfg.agent_count == 3);
  CHECK(cfg.seed == 42);
  CHECK(cfg.scenario_path == "scenarios/two_rooms.txt");

  REQUIRE(cfg.world.beam_angles.size() == 4);
  CHECK(cfg.world.beam_angles[0] == doctest::Approx(0.0));
  CHECK(cfg.world.beam_angles[1] == doctest::Approx(kPi / 2.0));
  CHECK(cfg.world.beam_angles[2] == doctest::Approx(kPi));
  CHECK(cfg.world.beam_angles[3] == doctest::Approx(1.5 * kPi));
  CHECK(cfg.world.max_range == doctest::Approx(4.0));
  CHECK(cfg.world.limits.s_x == doctest::Approx(0.5));
  CHECK(cfg.world.limits.s_theta == doctest::Approx(kPi / 2.0));
  CHECK(cfg.world.odom_noise_xy == 0.0);

  CHECK(cfg.map_size_cells == 100);
  CHECK(cfg.map_resolution == doctest::Approx(0.1));
  CHECK(cfg.slam.alpha == 100);
  CHECK(cfg.slam.hole_width == doctest::Approx(0.4));
  CHECK(cfg.slam.quality_threshold == doctest::Approx(600.0));

  CHECK(cfg.scan_match.iterations == 1000);
  CHECK(cfg.scan_match.sigma_xy == doctest::Approx(0.05));
  CHECK(cfg.scan_match.sigma_theta == doctest::Approx(2.0 * kPi / 180.0));
  CHECK(cfg.fusion_beta == doctest::Approx(0.2));
  CHECK(cfg.fusion_min_improvement == doctest::Approx(200.0));

  CHECK(cfg.occupied_threshold == 64);
  CHECK(cfg.landmark_spacing == doctest::Approx(0.4));
  CHECK(cfg.icp.max_iterations == 50);
  CHECK(cfg.resync_period == doctest::Approx(10.0));

  CHECK(cfg.explore.lambda == doctest::Approx(0.5));
  CHECK(cfg.explore.delta_t == doctest::Approx(1.0));
  CHECK(cfg.exclude_occupied_targets);
  CHECK(cfg.target_timeout == doctest::Approx(30.0));

  CHECK(cfg.gains.k_c == doctest::Approx(0.5));
  CHECK(cfg.gains.k_s == doctest::Approx(2.0));
  CHECK(cfg.gains.k_t == doctest::Approx(1.0));
  CHECK(cfg.gains.k_theta == doctest::Approx(1.0));

  CHECK(cfg.avoidance.enabled);
  CHECK(cfg.avoidance.d_safe == doctest::Approx(0.5));
  CHECK(cfg.avoidance.k_rep == doctest::Approx(0.1));

  CHECK(cfg.swarm.broadcast_budget == 4096);
  CHECK(cfg.swarm.mode == BroadcastMode::all);
  REQUIRE(cfg.initial_poses.size() == 3);
  CHECK(cfg.initial_poses[0].position.x == doctest::Approx(1.2));
  CHECK(cfg.initial_poses[0].position.y == doctest::Approx(1.8));
  CHECK(cfg.initial_poses[1].position.y == doctest::Approx(2.6));
  CHECK(cfg.initial_poses[2].position.y == doctest::Approx(3.4));
  CHECK(cfg.initial_poses[0].theta == doctest::Approx(0.0));

  CHECK(cfg.mission.dt == doctest::Approx(0.01));
  CHECK(cfg.mission.duration == doctest::Approx(180.0));
  CHECK(cfg.mission.sync_duration == doctest::Approx(5.0));
  CHECK(cfg.mission.log_period == doctest::Approx(0.5));
  CHECK(cfg.mission.snapshot_period == doctest::Approx(30.0));
}

TEST_CASE("the shipped config file is byte-identical to the defaults") {
  CHECK(read_text_file("configs/default.cfg") == default_config_text());
}

TEST_CASE("parsing handles comments, spacing, and repeats") {
  std::string text = default_config_text();
  text += "\n[control]\n";
  text += "   k_c =  2.5   # drives harder\n";
  text += "k_c = 3.5\n";  // repeated: last one wins
  text += "# k_c = 9.9\n";
  const SimConfig cfg = parse_config_text(text, "test.cfg");
  CHECK(cfg.gains.k_c == doctest::Approx(3.5));
}

TEST_CASE("angles are degrees on disk and radians in memory") {
  std::string text = default_config_text();
  text += "\n[world]\nmax_yaw_rate_deg = 180\nbeam_angles_deg = 0, 45\n";
  text += "[scan_match]\nsigma_theta_deg = 10\nmax_offset_theta_deg = 90\n";
  text += "[swarm]\ninitial_pose_2 = 1.2, 2.6, 270\n";
  const SimConfig cfg = parse_config_text(text, "test.cfg");
  CHECK(cfg.world.limits.s_theta == doctest::Approx(kPi));
  REQUIRE(cfg.world.beam_angles.size() == 2);
  CHECK(cfg.world.beam_angles[1] == doctest::Approx(kPi / 4.0));
  CHECK(cfg.scan_match.sigma_theta == doctest::Approx(10.0 * kPi / 180.0));
  CHECK(cfg.scan_match.max_offset_theta == doctest::Approx(kPi / 2.0));
  // pose headings wrap into (-pi, pi]
  CHECK(cfg.initial_poses[1].theta == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("parse errors carry the file name and line") {
  CHECK(parse_fails_with("[world]\nbogus = 1\n", "test.cfg:2: unknown key world.bogus"));
  CHECK(parse_fails_with("[nosuch]\nk = 1\n", "unknown key nosuch.k"));
  CHECK(parse_fails_with("[world\nlidar_max_range = 1\n", "test.cfg:1: malformed section header"));
  CHECK(parse_fails_with("[world]\nlidar_max_range\n", "test.cfg:2: expected key = value"));
  CHECK(parse_fails_with("[world]\n= 5\n", "test.cfg:2: empty key"));
  CHECK(parse_fails_with("[world]\nlidar_max_range = abc\n",
                         "bad number for world.lidar_max_range ('abc')"));
  CHECK(parse_fails_with("[world]\nlidar_max_range = 4.0x\n", "bad number"));
  CHECK(parse_fails_with("[scan_match]\niterations = 3.5\n",
                         "bad integer for scan_match.iterations"));
  CHECK(parse_fails_with("[avoidance]\nenabled = yes\n", "bad boolean"));
  CHECK(parse_fails_with("[world]\nbeam_angles_deg = 0,,90\n", "empty list element"));
  CHECK(parse_fails_with("[slam]\nalpha = 256\n", "alpha must lie in 0..255"));
  CHECK(parse_fails_with("[slam]\nalpha = -1\n", "alpha must lie in 0..255"));
  CHECK(parse_fails_with("[icp]\noccupied_threshold = 300\n",
                         "occupied_threshold must lie in 0..255"));
  CHECK(parse_fails_with("[swarm]\nbroadcast_mode = mesh\n",
                         "broadcast_mode must be all or chain"));
}

TEST_CASE("initial poses are validated as a set") {
  CHECK(parse_fails_with("[swarm]\nagent_count = 1\ninitial_pose_1 = 1, 2\n",
                         "initial_pose_1 needs x, y, theta_deg"));
  CHECK(parse_fails_with("[swarm]\nagent_count = 1\ninitial_pose_x = 1, 2, 0\n", "bad pose key"));
  CHECK(parse_fails_with(
      "[swarm]\nagent_count = 3\ninitial_pose_1 = 1, 1, 0\ninitial_pose_3 = 2, 2, 0\n",
      "numbered 1..3 without gaps"));
  CHECK(parse_fails_with("[swarm]\nagent_count = 2\ninitial_pose_1 = 1, 1, 0\n",
                         "expected 2 initial poses, found 1"));

  // a re-declared pose replaces the old one instead of duplicating it
  const SimConfig cfg = parse_config_text(
      "[swarm]\nagent_count = 1\ninitial_pose_1 = 1, 1, 0\ninitial_pose_1 = 3, 4, 90\n",
      "test.cfg");
  REQUIRE(cfg.initial_poses.size() == 1);
  CHECK(cfg.initial_poses[0].position.x == doctest::Approx(3.0));
  CHECK(cfg.initial_poses[0].position.y == doctest::Approx(4.0));
  CHECK(cfg.initial_poses[0].theta == doctest::Approx(kPi / 2.0));
}

TEST_CASE("load_config layers overrides onto a replayable snapshot") {
  SUBCASE("an empty path loads the defaults") {
    std::string snap;
    const SimConfig cfg = load_config("", std::nullopt, std::nullopt, &snap);
    CHECK(cfg.agent_count == 3);
    CHECK(snap == default_config_text());
  }

  SUBCASE("a real file round-trips") {
    std::string snap;
    const SimConfig cfg = load_config("configs/default.cfg", std::nullopt, std::nullopt, &snap);
    CHECK(cfg.seed == 42);
    CHECK(snap == default_config_text());
  }

  SUBCASE("overrides win and survive the snapshot round trip") {
    std::string snap;
    const SimConfig cfg =
        load_config("", std::string("scenarios/empty.txt"), std::uint64_t{1234}, &snap);
    CHECK(cfg.scenario_path == "scenarios/empty.txt");
    CHECK(cfg.seed == 1234);

    const SimConfig replayed = parse_config_text(snap, "snapshot");
    CHECK(replayed.scenario_path == cfg.scenario_path);
    CHECK(replayed.seed == cfg.seed);
    CHECK(replayed.agent_count == cfg.agent_count);
    CHECK(replayed.gains.k_c == cfg.gains.k_c);
  }

  SUBCASE("a missing file is a config error") {
    CHECK_THROWS_AS(load_config("no/such/file.cfg", std::nullopt, std::nullopt, nullptr),
                    ConfigError);
  }
}
