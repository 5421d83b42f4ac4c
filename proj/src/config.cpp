#include "swarmsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "swarmsim/errors.hpp"
#include "swarmsim/io.hpp"

namespace swarmsim {

namespace {

constexpr double kDegToRad = kPi / 180.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

std::vector<Entry> tokenize(const std::string& text, const std::string& name) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
    }
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty()) {
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    }
    entries.push_back(e);
  }
  return entries;
}

double parse_double(const Entry& e, const std::string& name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(name + ":" + std::to_string(e.line) + ": bad number for " + e.section + "." +
                      e.key + " ('" + e.value + "')");
  }
}

long long parse_int(const Entry& e, const std::string& name) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(name + ":" + std::to_string(e.line) + ": bad integer for " + e.section +
                      "." + e.key + " ('" + e.value + "')");
  }
}

bool parse_bool(const Entry& e, const std::string& name) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw ConfigError(name + ":" + std::to_string(e.line) + ": bad boolean for " + e.section + "." +
                    e.key + " (use true/false)");
}

std::vector<double> parse_double_list(const Entry& e, const std::string& name) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(e.value);
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) {
      throw ConfigError(name + ":" + std::to_string(e.line) + ": empty list element in " +
                        e.section + "." + e.key);
    }
    Entry sub = e;
    sub.value = token;
    out.push_back(parse_double(sub, name));
  }
  if (out.empty()) {
    throw ConfigError(name + ":" + std::to_string(e.line) + ": empty list for " + e.section + "." +
                      e.key);
  }
  return out;
}

}  // namespace

SimConfig parse_config_text(const std::string& text, const std::string& name) {
  SimConfig cfg;
  // poses arrive as "x, y, theta_deg" keyed by agent number; stitched at the end
  std::vector<std::pair<int, std::vector<double>>> poses;

  for (const Entry& e : tokenize(text, name)) {
    const std::string id = e.section + "." + e.key;
    if (id == "world.beam_angles_deg") {
      cfg.world.beam_angles.clear();
      for (double d : parse_double_list(e, name)) cfg.world.beam_angles.push_back(d * kDegToRad);
    } else if (id == "world.lidar_max_range") {
      cfg.world.max_range = parse_double(e, name);
    } else if (id == "world.range_noise_sigma") {
      cfg.world.range_noise_sigma = parse_double(e, name);
    } else if (id == "world.camera_offset") {
      cfg.world.camera.r_c = parse_double(e, name);
    } else if (id == "world.camera_width") {
      cfg.world.camera.width = parse_double(e, name);
    } else if (id == "world.camera_length") {
      cfg.world.camera.length = parse_double(e, name);
    } else if (id == "world.max_speed") {
      cfg.world.limits.s_x = parse_double(e, name);
    } else if (id == "world.max_yaw_rate_deg") {
      cfg.world.limits.s_theta = parse_double(e, name) * kDegToRad;
    } else if (id == "world.odom_noise_xy") {
      cfg.world.odom_noise_xy = parse_double(e, name);
    } else if (id == "world.odom_noise_theta_deg") {
      cfg.world.odom_noise_theta = parse_double(e, name) * kDegToRad;
    } else if (id == "slam.map_size_cells") {
      cfg.map_size_cells = static_cast<int>(parse_int(e, name));
    } else if (id == "slam.map_resolution") {
      cfg.map_resolution = parse_double(e, name);
    } else if (id == "slam.alpha") {
      const long long a = parse_int(e, name);
      if (a < 0 || a > 255) {
        throw ConfigError(name + ":" + std::to_string(e.line) + ": alpha must lie in 0..255");
      }
      cfg.slam.alpha = static_cast<int>(a);
    } else if (id == "slam.hole_width") {
      cfg.slam.hole_width = parse_double(e, name);
    } else if (id == "slam.quality_threshold") {
      cfg.slam.quality_threshold = parse_double(e, name);
    } else if (id == "scan_match.iterations") {
      cfg.scan_match.iterations = static_cast<int>(parse_int(e, name));
    } else if (id == "scan_match.sigma_xy") {
      cfg.scan_match.sigma_xy = parse_double(e, name);
    } else if (id == "scan_match.sigma_theta_deg") {
      cfg.scan_match.sigma_theta = parse_double(e, name) * kDegToRad;
    } else if (id == "scan_match.max_offset_xy") {
      cfg.scan_match.max_offset_xy = parse_double(e, name);
    } else if (id == "scan_match.max_offset_theta_deg") {
      cfg.scan_match.max_offset_theta = parse_double(e, name) * kDegToRad;
    } else if (id == "scan_match.fusion_beta") {
      cfg.fusion_beta = parse_double(e, name);
    } else if (id == "scan_match.min_improvement") {
      cfg.fusion_min_improvement = parse_double(e, name);
    } else if (id == "icp.occupied_threshold") {
      const long long v = parse_int(e, name);
      if (v < 0 || v > 255) {
        throw ConfigError(name + ":" + std::to_string(e.line) +
                          ": occupied_threshold must lie in 0..255");
      }
      cfg.occupied_threshold = static_cast<int>(v);
    } else if (id == "icp.landmark_spacing") {
      cfg.landmark_spacing = parse_double(e, name);
    } else if (id == "icp.match_tolerance") {
      cfg.icp.match_tolerance = parse_double(e, name);
    } else if (id == "icp.max_iterations") {
      cfg.icp.max_iterations = static_cast<int>(parse_int(e, name));
    } else if (id == "icp.convergence_eps") {
      cfg.icp.convergence_eps = parse_double(e, name);
    } else if (id == "icp.resync_period") {
      cfg.resync_period = parse_double(e, name);
    } else if (id == "explore.coverage_size_cells") {
      cfg.coverage_size_cells = static_cast<int>(parse_int(e, name));
    } else if (id == "explore.coverage_resolution") {
      cfg.coverage_resolution = parse_double(e, name);
    } else if (id == "explore.lambda") {
      cfg.explore.lambda = parse_double(e, name);
    } else if (id == "explore.sigma1") {
      cfg.explore.sigma1 = parse_double(e, name);
    } else if (id == "explore.sigma2") {
      cfg.explore.sigma2 = parse_double(e, name);
    } else if (id == "explore.delta_t") {
      cfg.explore.delta_t = parse_double(e, name);
    } else if (id == "explore.exclude_occupied_targets") {
      cfg.exclude_occupied_targets = parse_bool(e, name);
    } else if (id == "explore.target_timeout") {
      cfg.target_timeout = parse_double(e, name);
    } else if (id == "control.k_c") {
      cfg.gains.k_c = parse_double(e, name);
    } else if (id == "control.k_s") {
      cfg.gains.k_s = parse_double(e, name);
    } else if (id == "control.k_t") {
      cfg.gains.k_t = parse_double(e, name);
    } else if (id == "control.k_theta") {
      cfg.gains.k_theta = parse_double(e, name);
    } else if (id == "avoidance.enabled") {
      cfg.avoidance.enabled = parse_bool(e, name);
    } else if (id == "avoidance.d_safe") {
      cfg.avoidance.d_safe = parse_double(e, name);
    } else if (id == "avoidance.k_rep") {
      cfg.avoidance.k_rep = parse_double(e, name);
    } else if (id == "swarm.agent_count") {
      cfg.agent_count = static_cast<int>(parse_int(e, name));
    } else if (e.section == "swarm" && e.key.rfind("initial_pose_", 0) == 0) {
      int idx = 0;
      try {
        idx = std::stoi(e.key.substr(13));
      } catch (const std::exception&) {
        throw ConfigError(name + ":" + std::to_string(e.line) + ": bad pose key " + e.key);
      }
      const std::vector<double> vals = parse_double_list(e, name);
      if (vals.size() != 3) {
        throw ConfigError(name + ":" + std::to_string(e.line) + ": " + e.key +
                          " needs x, y, theta_deg");
      }
      std::erase_if(poses, [idx](const auto& p) { return p.first == idx; });
      poses.emplace_back(idx, vals);
    } else if (id == "swarm.broadcast_budget") {
      cfg.swarm.broadcast_budget = static_cast<int>(parse_int(e, name));
    } else if (id == "swarm.broadcast_mode") {
      if (e.value == "all") {
        cfg.swarm.mode = BroadcastMode::all;
      } else if (e.value == "chain") {
        cfg.swarm.mode = BroadcastMode::chain;
      } else {
        throw ConfigError(name + ":" + std::to_string(e.line) +
                          ": broadcast_mode must be all or chain");
      }
    } else if (id == "mission.scenario") {
      cfg.scenario_path = e.value;
    } else if (id == "mission.seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(e, name));
    } else if (id == "mission.dt") {
      cfg.mission.dt = parse_double(e, name);
    } else if (id == "mission.duration") {
      cfg.mission.duration = parse_double(e, name);
    } else if (id == "mission.sync_duration") {
      cfg.mission.sync_duration = parse_double(e, name);
    } else if (id == "mission.log_period") {
      cfg.mission.log_period = parse_double(e, name);
    } else if (id == "mission.snapshot_period") {
      cfg.mission.snapshot_period = parse_double(e, name);
    } else {
      throw ConfigError(name + ":" + std::to_string(e.line) + ": unknown key " + id);
    }
  }

  std::sort(poses.begin(), poses.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  cfg.initial_poses.clear();
  for (int i = 0; i < static_cast<int>(poses.size()); ++i) {
    if (poses[i].first != i + 1) {
      throw ConfigError(name + ": initial poses must be numbered 1.." +
                        std::to_string(cfg.agent_count) + " without gaps");
    }
    const auto& v = poses[i].second;
    cfg.initial_poses.push_back({{v[0], v[1]}, wrap_angle(v[2] * kDegToRad)});
  }
  if (static_cast<int>(cfg.initial_poses.size()) != cfg.agent_count) {
    throw ConfigError(name + ": expected " + std::to_string(cfg.agent_count) +
                      " initial poses, found " + std::to_string(cfg.initial_poses.size()));
  }
  return cfg;
}

std::string default_config_text() {
  return R"(# swarmsim mission configuration (angles in degrees, everything else SI)

[world]
beam_angles_deg = 0, 90, 180, 270
lidar_max_range = 4.0
range_noise_sigma = 0.0
camera_offset = 0.2
camera_width = 1.0
camera_length = 1.0
max_speed = 0.5
max_yaw_rate_deg = 90.0
odom_noise_xy = 0.0
odom_noise_theta_deg = 0.0

[slam]
map_size_cells = 100
map_resolution = 0.1
alpha = 100
hole_width = 0.4
quality_threshold = 600.0

[scan_match]
iterations = 1000
sigma_xy = 0.05
sigma_theta_deg = 2.0
max_offset_xy = 0.15
max_offset_theta_deg = 6.0
fusion_beta = 0.2
min_improvement = 200.0

[icp]
occupied_threshold = 64
landmark_spacing = 0.4
match_tolerance = 1.0
max_iterations = 50
convergence_eps = 0.0001
resync_period = 10.0

[explore]
coverage_size_cells = 100
coverage_resolution = 0.1
lambda = 0.5
sigma1 = 0.3
sigma2 = 0.1
delta_t = 1.0
exclude_occupied_targets = true
target_timeout = 30.0

[control]
k_c = 0.5
k_s = 2.0
k_t = 1.0
k_theta = 1.0

[avoidance]
enabled = true
d_safe = 0.5
k_rep = 0.1

[swarm]
agent_count = 3
initial_pose_1 = 1.2, 1.8, 0.0
initial_pose_2 = 1.2, 2.6, 0.0
initial_pose_3 = 1.2, 3.4, 0.0
broadcast_budget = 4096
broadcast_mode = all

[mission]
scenario = scenarios/two_rooms.txt
seed = 42
dt = 0.01
duration = 180.0
sync_duration = 5.0
log_period = 0.5
snapshot_period = 30.0
)";
}

SimConfig load_config(const std::string& path, const std::optional<std::string>& scenario_override,
                      const std::optional<std::uint64_t>& seed_override,
                      std::string* snapshot_text) {
  std::string text = path.empty() ? default_config_text() : read_text_file(path);
  // overrides are appended (last value wins), keeping the snapshot replayable
  // without any float round-tripping
  std::string overrides;
  if (scenario_override) {
    overrides += "scenario = " + *scenario_override + "\n";
  }
  if (seed_override) {
    overrides += "seed = " + std::to_string(*seed_override) + "\n";
  }
  if (!overrides.empty()) {
    if (!text.empty() && text.back() != '\n') text += "\n";
    text += "\n[mission]\n" + overrides;
  }
  SimConfig cfg = parse_config_text(text, path.empty() ? "<defaults>" : path);
  if (snapshot_text != nullptr) {
    *snapshot_text = text;
  }
  return cfg;
}

}  // namespace swarmsim
