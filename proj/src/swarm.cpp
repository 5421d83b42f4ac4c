#include "swarmsim/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swarmsim/errors.hpp"
#include "swarmsim/log.hpp"

namespace swarmsim {

MessageBus::MessageBus(int byte_budget, int agent_count) : budget_(byte_budget) {
  if (byte_budget <= 0) {
    throw ConfigError("broadcast budget must be positive");
  }
  used_.assign(static_cast<std::size_t>(agent_count) + 1, 0);
}

void MessageBus::begin_step() {
  std::fill(used_.begin(), used_.end(), 0);
  messages_.clear();
}

void MessageBus::charge(int sender, int bytes, const std::string& label) {
  if (sender < 0 || sender >= static_cast<int>(used_.size())) {
    throw ConfigError("message sender id out of range");
  }
  used_[sender] += bytes;
  if (used_[sender] > budget_) {
    throw BandwidthViolationError("agent " + std::to_string(sender) + " exceeded the " +
                                  std::to_string(budget_) + " byte step budget sending " + label +
                                  " (" + std::to_string(used_[sender]) + " bytes)");
  }
}

void MessageBus::send_pose(const PoseMessage& msg) {
  charge(msg.sender, kPoseMessageBytes, "a pose message");
  messages_.push_back(msg);
}

void MessageBus::send_payload(int sender, int bytes, const std::string& label) {
  charge(sender, bytes, label);
}

std::vector<PoseMessage> MessageBus::inbox(int recipient) const {
  std::vector<PoseMessage> out;
  for (const PoseMessage& m : messages_) {
    if (m.sender != recipient) {
      out.push_back(m);
    }
  }
  return out;
}

int MessageBus::bytes_used(int sender) const {
  if (sender < 0 || sender >= static_cast<int>(used_.size())) {
    return 0;
  }
  return used_[sender];
}

std::vector<std::vector<PoseMessage>> broadcast_and_collect(const std::vector<AgentState>& agents,
                                                            MessageBus& bus, int time_index,
                                                            BroadcastMode mode) {
  for (const AgentState& a : agents) {
    bus.send_pose({a.id, a.estimated_pose, time_index});
  }
  std::vector<std::vector<PoseMessage>> inboxes;
  inboxes.reserve(agents.size());
  for (const AgentState& a : agents) {
    std::vector<PoseMessage> in = bus.inbox(a.id);
    if (mode == BroadcastMode::chain) {
      std::erase_if(in, [&](const PoseMessage& m) { return std::abs(m.sender - a.id) != 1; });
    }
    inboxes.push_back(std::move(in));
  }
  return inboxes;
}

namespace {

void validate_config(const SimConfig& cfg, const EnvironmentMap& env) {
  if (cfg.agent_count < 1) {
    throw ConfigError("agent_count must be at least 1");
  }
  if (static_cast<int>(cfg.initial_poses.size()) != cfg.agent_count) {
    throw ConfigError("need exactly one initial pose per agent (" +
                      std::to_string(cfg.initial_poses.size()) + " given for " +
                      std::to_string(cfg.agent_count) + " agents)");
  }
  if (cfg.mission.dt <= 0.0 || cfg.mission.duration < 0.0 || cfg.mission.sync_duration < 0.0) {
    throw ConfigError("dt must be positive and durations non-negative");
  }
  const double limit = 255.0 * cfg.explore.delta_t;
  if (cfg.mission.duration > limit + 1e-9) {
    throw ConfigError("mission duration " + std::to_string(cfg.mission.duration) +
                      " s exceeds the coverage time limit 255*delta_t = " + std::to_string(limit) +
                      " s");
  }
  if (cfg.world.limits.s_x <= 0.0 || cfg.world.limits.s_theta <= 0.0) {
    throw ConfigError("saturation limits must be positive");
  }
  if (cfg.fusion_beta < 0.0 || cfg.fusion_beta > 1.0) {
    throw ConfigError("fusion_beta must lie in [0, 1]");
  }
  if (cfg.explore.lambda < 0.0 || cfg.explore.lambda > 1.0) {
    throw ConfigError("lambda must lie in [0, 1]");
  }
  if (cfg.explore.delta_t <= 0.0) {
    throw ConfigError("delta_t must be positive");
  }
  for (int i = 0; i < cfg.agent_count; ++i) {
    const Vec2 p = cfg.initial_poses[i].position;
    if (!env.contains(p) || env.occupied_at(p)) {
      throw ConfigError("initial pose of agent " + std::to_string(i + 1) +
                        " is outside free space");
    }
    for (int j = 0; j < i; ++j) {
      if ((p - cfg.initial_poses[j].position).norm() < 1e-9) {
        throw ConfigError("agents " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                          " start at the same position");
      }
    }
  }
}

LidarScan sense(const EnvironmentMap& env, const SimConfig& cfg, AgentState& agent) {
  LidarScan scan;
  try {
    scan = raycast(env, agent.pose, cfg.world.beam_angles, cfg.world.max_range);
  } catch (const InvalidPoseError& e) {
    char msg[160];
    std::snprintf(msg, sizeof(msg), "agent %d crashed at (%.3f, %.3f): %s", agent.id,
                  agent.pose.position.x, agent.pose.position.y, e.what());
    throw InvalidPoseError(msg);
  }
  if (cfg.world.range_noise_sigma > 0.0) {
    for (std::size_t b = 0; b < scan.size(); ++b) {
      if (scan.hit_flags[b]) {
        scan.ranges[b] = std::clamp(scan.ranges[b] + agent.rng.normal(0.0, cfg.world.range_noise_sigma),
                                    1e-3, scan.max_range - 1e-9);
      }
    }
  }
  return scan;
}

Vec2 camera_center_of(const Pose2D& pose, const CameraParams& cam) {
  return pose.position + cam.r_c * heading_vector(pose.theta);
}

// Repulsion from the nearest remembered wall cell. The four instantaneous
// beams are blind to surfaces approached diagonally, so the agent also backs
// away from occupied cells in its own map.
Vec2 map_repulsion(const SlamMap& map, const Vec2& p, double d_safe, double k_rep,
                   std::uint8_t occupied_threshold) {
  if (d_safe <= 0.0) return {};
  const ByteGrid& grid = map.grid();
  const Vec2 lo = p - Vec2{d_safe, d_safe} - grid.min_corner();
  const Vec2 hi = p + Vec2{d_safe, d_safe} - grid.min_corner();
  const int x0 = std::max(0, static_cast<int>(std::floor(lo.x * grid.inv_resolution())));
  const int y0 = std::max(0, static_cast<int>(std::floor(lo.y * grid.inv_resolution())));
  const int x1 = std::min(grid.width_cells() - 1,
                          static_cast<int>(std::floor(hi.x * grid.inv_resolution())));
  const int y1 = std::min(grid.height_cells() - 1,
                          static_cast<int>(std::floor(hi.y * grid.inv_resolution())));

  double nearest_sq = d_safe * d_safe;
  Vec2 nearest;
  bool found = false;
  for (int iy = y0; iy <= y1; ++iy) {
    for (int ix = x0; ix <= x1; ++ix) {
      if (grid.at(ix, iy) > occupied_threshold) continue;
      const Vec2 c = grid.cell_center(ix, iy);
      const double d_sq = (c - p).squared_norm();
      if (d_sq < nearest_sq) {
        nearest_sq = d_sq;
        nearest = c;
        found = true;
      }
    }
  }
  if (!found) return {};
  const double dist = std::sqrt(nearest_sq);
  constexpr double kFloorDist = 0.01;
  const double d = std::max(dist, kFloorDist);
  const Vec2 away = dist > kFloorDist ? (p - nearest) / dist : Vec2{1.0, 0.0};
  return k_rep * (1.0 / d - 1.0 / d_safe) * away;
}

// Pairwise alignment along the id chain; throws SyncFailureError when a link
// cannot be established.
std::vector<RigidTransform2D> align_chain(std::vector<AgentState>& agents, const SimConfig& cfg,
                                          MessageBus& bus, double t, MissionLog& log,
                                          const std::vector<RigidTransform2D>* warm_start) {
  bus.begin_step();
  for (AgentState& a : agents) {
    a.landmarks = extract_landmarks(a.slam, static_cast<std::uint8_t>(cfg.occupied_threshold),
                                    cfg.landmark_spacing);
    a.landmarks.owner = a.id;
    bus.send_payload(a.id, kLandmarkPointBytes * static_cast<int>(a.landmarks.points.size()),
                     "a landmark set");
  }

  std::vector<RigidTransform2D> links;
  for (std::size_t i = 0; i + 1 < agents.size(); ++i) {
    const RigidTransform2D initial =
        warm_start != nullptr ? (*warm_start)[i] : RigidTransform2D{};
    try {
      const IcpResult r = icp(agents[i].landmarks, agents[i + 1].landmarks, initial, cfg.icp);
      log.sync_records.push_back({t, agents[i].id, agents[i + 1].id, r.transform.theta,
                                  r.transform.t, r.iterations, r.mean_residual});
      if (!r.converged) {
        throw SyncFailureError("icp between agents " + std::to_string(agents[i].id) + " and " +
                               std::to_string(agents[i + 1].id) + " did not converge (residual " +
                               std::to_string(r.mean_residual) + ")");
      }
      links.push_back(r.transform);
    } catch (const NoCorrespondenceError& e) {
      throw SyncFailureError("icp between agents " + std::to_string(agents[i].id) + " and " +
                             std::to_string(agents[i + 1].id) + " failed: " + e.what());
    } catch (const DegenerateConfigurationError& e) {
      throw SyncFailureError("icp between agents " + std::to_string(agents[i].id) + " and " +
                             std::to_string(agents[i + 1].id) + " failed: " + e.what());
    }
  }
  return links;
}

// Rebuilds every agent's j -> i transform table from the chain links
// (link[i] maps agent i+1's frame ... i.e. index i holds i -> i+1).
void apply_links(std::vector<AgentState>& agents, const SimConfig& cfg,
                 const std::vector<RigidTransform2D>& links) {
  const int n = static_cast<int>(agents.size());
  for (int i = 0; i < n; ++i) {
    agents[i].neighbor_transforms.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (cfg.use_ground_truth_transforms) {
        agents[i].neighbor_transforms[agents[j].id] =
            compose(agents[i].frame.inverse(), agents[j].frame);
        continue;
      }
      RigidTransform2D t;
      if (j < i) {  // forward along the chain j, j+1, ..., i
        std::vector<RigidTransform2D> parts(links.begin() + j, links.begin() + i);
        t = chain_transforms(parts);
      } else {  // backward: invert the chain i, ..., j
        std::vector<RigidTransform2D> parts(links.begin() + i, links.begin() + j);
        t = chain_transforms(parts).inverse();
      }
      agents[i].neighbor_transforms[agents[j].id] = t;
    }
  }
}

}  // namespace

MissionLog run_mission(const SimConfig& cfg, const EnvironmentMap& env) {
  validate_config(cfg, env);

  MissionLog log;
  log.agent_count = cfg.agent_count;
  log.trajectories.resize(cfg.agent_count);

  std::vector<AgentState> agents;
  agents.reserve(cfg.agent_count);
  for (int i = 0; i < cfg.agent_count; ++i) {
    AgentState a;
    a.id = i + 1;
    a.pose = cfg.initial_poses[i];
    a.pose.theta = wrap_angle(a.pose.theta);
    a.estimated_pose = {};
    a.frame = {a.pose.theta, a.pose.position};  // local -> world
    // local maps are centered on the announced arena center so one grid can
    // hold the whole site regardless of where the agent lifts off
    const Vec2 arena_center{env.width_m() / 2.0, env.height_m() / 2.0};
    const Vec2 center_local = a.frame.inverse().apply(arena_center);
    a.slam = SlamMap(cfg.map_size_cells, cfg.map_resolution, center_local);
    a.coverage = CoverageMap(cfg.coverage_size_cells, cfg.coverage_resolution, center_local);
    a.target.previous = camera_center_of(a.estimated_pose, cfg.world.camera);
    a.rng = Rng::for_agent(cfg.seed, a.id);
    agents.push_back(std::move(a));
  }

  MessageBus bus(cfg.swarm.broadcast_budget, cfg.agent_count);

  // ---- phase 1: hold position, sweep the heading once, map, then align ----
  const long sync_steps = std::lround(cfg.mission.sync_duration / cfg.mission.dt);
  const double sweep_rate =
      sync_steps > 0 ? std::min(2.0 * kPi / cfg.mission.sync_duration, cfg.world.limits.s_theta)
                     : 0.0;
  for (long s = 0; s < sync_steps; ++s) {
    for (AgentState& a : agents) {
      const LidarScan scan = sense(env, cfg, a);
      update_map(a.slam, a.estimated_pose, scan, cfg.slam);
      a.pose = step_kinematics(a.pose, {}, sweep_rate, cfg.mission.dt, cfg.world.limits);
      a.estimated_pose =
          step_kinematics(a.estimated_pose, {}, sweep_rate, cfg.mission.dt, cfg.world.limits);
    }
  }
  std::vector<RigidTransform2D> links;
  if (cfg.agent_count > 1) {
    links = align_chain(agents, cfg, bus, 0.0, log, nullptr);
  } else {
    agents[0].landmarks = extract_landmarks(
        agents[0].slam, static_cast<std::uint8_t>(cfg.occupied_threshold), cfg.landmark_spacing);
    agents[0].landmarks.owner = agents[0].id;
  }
  apply_links(agents, cfg, links);
  SWARMSIM_LOG(1, "sync phase complete, %zu chain links", links.size());

  // ---- phase 2: explore ----
  const long steps = std::lround(cfg.mission.duration / cfg.mission.dt);
  const long log_every = std::max<long>(1, std::lround(cfg.mission.log_period / cfg.mission.dt));
  const long snap_every =
      std::max<long>(1, std::lround(cfg.mission.snapshot_period / cfg.mission.dt));
  const long resync_every = std::max<long>(1, std::lround(cfg.resync_period / cfg.mission.dt));

  auto log_state = [&](double t) {
    for (AgentState& a : agents) {
      log.trajectories[a.id - 1].push_back({t, a.pose, a.estimated_pose});
      log.coverage.push_back({t, a.id, coverage_percentage(a.coverage)});
    }
  };
  auto log_snapshot = [&](long step) {
    for (AgentState& a : agents) {
      log.snapshots.push_back({static_cast<int>(step), a.id, a.slam, a.coverage});
    }
  };

  log_state(0.0);

  std::vector<LidarScan> scans(agents.size());
  std::vector<Vec2> commands(agents.size());
  std::vector<double> yaw_commands(agents.size());

  for (long s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * cfg.mission.dt;
    const int k = static_cast<int>(t / cfg.explore.delta_t) + 1;

    // sense
    for (std::size_t i = 0; i < agents.size(); ++i) {
      scans[i] = sense(env, cfg, agents[i]);
    }

    // localize
    for (std::size_t i = 0; i < agents.size(); ++i) {
      AgentState& a = agents[i];
      const Pose2D matched = scan_match(a.slam, scans[i], a.estimated_pose, cfg.scan_match, a.rng);
      // A cost spike at the prior can mean odometry drift, but it can also
      // mean the beam just reached a surface the map has never seen. Only
      // beams whose prior endpoint lands on confidently mapped cells (carved
      // wall or established free space) witness drift; the unknown band
      // around 127 is novel terrain and mismatch there is expected.
      const auto prior_vals = endpoint_values(a.slam, scans[i], a.estimated_pose);
      const auto matched_vals = endpoint_values(a.slam, scans[i], matched);
      double informative_prior = 0.0;
      double informative_matched = 0.0;
      int informative = 0;
      int witnesses = 0;
      for (std::size_t b = 0; b < prior_vals.size(); ++b) {
        if (prior_vals[b] < 0.0) continue;
        if (prior_vals[b] >= 100.0 && prior_vals[b] <= 160.0) continue;
        informative += 1;
        informative_prior += prior_vals[b];
        informative_matched += matched_vals[b];
        // map says established free space, scan says hit: that contradiction
        // is what real pose error looks like. Endpoints on carve-ramp cells
        // (<160) also arise from grid discretisation at a perfect pose, so
        // they do not count as witnesses.
        if (prior_vals[b] > 160.0) witnesses += 1;
      }
      const double matched_cost = scan_cost(a.slam, scans[i], matched);
      if (log_level() >= 3 && a.id == 1) {
        SWARMSIM_LOG(3, "s=%ld prior=(%.3f,%.3f|%.3f) ic=%.0f/%d matched=(%.3f,%.3f|%.3f) ic=%.0f",
                     s, a.estimated_pose.position.x, a.estimated_pose.position.y,
                     a.estimated_pose.theta, informative_prior, informative, matched.position.x,
                     matched.position.y, matched.theta, informative_matched);
      }
      if (witnesses >= 2 && matched_cost <= cfg.slam.quality_threshold &&
          informative_prior - informative_matched >= cfg.fusion_min_improvement) {
        a.estimated_pose = fuse_poses(a.estimated_pose, matched, cfg.fusion_beta);
      }
      update_map(a.slam, a.estimated_pose, scans[i], cfg.slam);
    }

    // communicate
    bus.begin_step();
    const auto inboxes = broadcast_and_collect(agents, bus, k, cfg.swarm.mode);
    if (cfg.agent_count > 1 && s > 0 && s % resync_every == 0) {
      try {
        links = align_chain(agents, cfg, bus, t, log, &links);
        apply_links(agents, cfg, links);
      } catch (const SyncFailureError& e) {
        // keep the previous alignment; a failed refresh is not fatal
        SWARMSIM_LOG(1, "resync at t=%.2f kept previous transforms: %s", t, e.what());
      }
    }

    // plan
    for (std::size_t i = 0; i < agents.size(); ++i) {
      AgentState& a = agents[i];
      const FovRectangle own_fov = camera_fov(a.estimated_pose, cfg.world.camera);
      std::vector<FovRectangle> fovs = {own_fov};
      std::vector<Vec2> neighbor_positions;
      for (const PoseMessage& m : inboxes[i]) {
        const auto it = a.neighbor_transforms.find(m.sender);
        if (it == a.neighbor_transforms.end()) continue;
        const Pose2D neighbor_local = it->second.apply(m.pose);
        fovs.push_back(camera_fov(neighbor_local, cfg.world.camera));
        neighbor_positions.push_back(neighbor_local.position);
      }
      stamp_coverage(a.coverage, fovs, k);

      const Vec2 x_c = camera_center_of(a.estimated_pose, cfg.world.camera);
      const bool refresh = !a.target_valid || point_in_fov(own_fov, a.target.current) ||
                           (t - a.target_set_time) >= cfg.target_timeout;
      if (refresh) {
        const Vec2 next = select_target(a.coverage, t, x_c, a.target, cfg.explore,
                                        cfg.exclude_occupied_targets ? &a.slam : nullptr);
        a.target.previous = a.target_valid ? a.target.current : next;
        a.target.current = next;
        a.target_valid = true;
        a.target_set_time = t;
      }

      ErrorState e;
      e.e_c = a.target.current - x_c;
      const auto theta_d = desired_heading(e.e_c);
      a.target.theta_d = theta_d.value_or(a.estimated_pose.theta);
      e.e_theta = wrap_angle(a.target.theta_d - a.estimated_pose.theta);

      Vec2 u = position_control(e, cfg.gains);
      if (cfg.avoidance.enabled) {
        u += avoidance_velocity(a.estimated_pose, neighbor_positions, scans[i],
                                cfg.avoidance.d_safe, cfg.avoidance.k_rep, a.rng);
        u += map_repulsion(a.slam, a.estimated_pose.position, cfg.avoidance.d_safe,
                           cfg.avoidance.k_rep, static_cast<std::uint8_t>(cfg.occupied_threshold));
      }
      commands[i] = u;
      yaw_commands[i] = heading_control(e.e_theta, cfg.gains.k_theta);
      if (s % 100 == 0) {
        SWARMSIM_LOG(2,
                     "t=%.1f agent %d true=(%.2f,%.2f|%.2f) est=(%.2f,%.2f|%.2f) "
                     "target=(%.2f,%.2f) u=(%.2f,%.2f)",
                     t, a.id, a.pose.position.x, a.pose.position.y, a.pose.theta,
                     a.estimated_pose.position.x, a.estimated_pose.position.y,
                     a.estimated_pose.theta, a.target.current.x, a.target.current.y, u.x, u.y);
      }
    }

    // act
    for (std::size_t i = 0; i < agents.size(); ++i) {
      AgentState& a = agents[i];
      const Vec2 u_world = rotate(commands[i], a.frame.theta);
      a.pose = step_kinematics(a.pose, u_world, yaw_commands[i], cfg.mission.dt, cfg.world.limits);
      a.estimated_pose =
          step_kinematics(a.estimated_pose, commands[i], yaw_commands[i], cfg.mission.dt,
                          cfg.world.limits);
      if (cfg.world.odom_noise_xy > 0.0) {
        a.estimated_pose.position.x += a.rng.normal(0.0, cfg.world.odom_noise_xy);
        a.estimated_pose.position.y += a.rng.normal(0.0, cfg.world.odom_noise_xy);
      }
      if (cfg.world.odom_noise_theta > 0.0) {
        a.estimated_pose.theta =
            wrap_angle(a.estimated_pose.theta + a.rng.normal(0.0, cfg.world.odom_noise_theta));
      }
    }

    // log
    if ((s + 1) % log_every == 0) {
      log_state(static_cast<double>(s + 1) * cfg.mission.dt);
    }
    if ((s + 1) % snap_every == 0) {
      log_snapshot(s + 1);
    }
  }

  if (steps % snap_every != 0) {
    log_snapshot(steps);
  }
  for (AgentState& a : agents) {
    a.landmarks = extract_landmarks(a.slam, static_cast<std::uint8_t>(cfg.occupied_threshold),
                                    cfg.landmark_spacing);
    a.landmarks.owner = a.id;
    log.final_landmarks.push_back(a.landmarks);
  }
  return log;
}

}  // namespace swarmsim
