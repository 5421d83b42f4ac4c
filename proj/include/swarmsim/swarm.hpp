#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "swarmsim/explore.hpp"
#include "swarmsim/icp.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/slam.hpp"
#include "swarmsim/world.hpp"

namespace swarmsim {

struct WorldParams {
  std::vector<double> beam_angles = {0.0, 0.5 * kPi, kPi, -0.5 * kPi};
  double max_range = 4.0;
  double range_noise_sigma = 0.0;
  CameraParams camera;
  SaturationLimits limits;
  double odom_noise_xy = 0.0;     // per-step estimate jitter, meters
  double odom_noise_theta = 0.0;  // radians
};

struct AvoidanceParams {
  bool enabled = true;
  double d_safe = 0.5;
  double k_rep = 0.1;
};

enum class BroadcastMode { all, chain };

struct SwarmParams {
  int broadcast_budget = 4096;  // bytes per agent per step, must stay below map size
  BroadcastMode mode = BroadcastMode::all;
};

struct MissionParams {
  double dt = 0.01;
  double duration = 180.0;
  double sync_duration = 5.0;
  double log_period = 0.5;
  double snapshot_period = 30.0;
};

struct SimConfig {
  std::string scenario_path;
  int agent_count = 3;
  std::vector<Pose2D> initial_poses;  // world frame
  std::uint64_t seed = 42;

  WorldParams world;
  SlamParams slam;
  int map_size_cells = 100;
  double map_resolution = 0.1;
  ScanMatchParams scan_match;
  double fusion_beta = 0.2;
  // fuse only when the match beats the odometry prior's cost by this much;
  // with few beams many poses tie at zero cost and a tie is not evidence
  double fusion_min_improvement = 200.0;
  IcpParams icp;
  int occupied_threshold = 64;
  double landmark_spacing = 0.4;
  double resync_period = 10.0;
  ExploreParams explore;
  int coverage_size_cells = 100;
  double coverage_resolution = 0.1;
  bool exclude_occupied_targets = true;
  double target_timeout = 30.0;
  ControlGains gains;
  AvoidanceParams avoidance;
  SwarmParams swarm;
  MissionParams mission;

  // test hook: replace the ICP alignment with exact frame transforms
  bool use_ground_truth_transforms = false;
};

struct PoseMessage {
  int sender = 0;  // agent id, 1-based
  Pose2D pose;     // estimated, in the sender's map frame
  int time_index = 0;
};

// accounted wire size: id (4) + pose (3 x 8) + time index (4)
constexpr int kPoseMessageBytes = 32;
constexpr int kLandmarkPointBytes = 16;

// Broadcast medium with per-step, per-sender byte accounting. Sending past
// the budget throws BandwidthViolationError; receiving is free.
class MessageBus {
 public:
  MessageBus(int byte_budget, int agent_count);

  void begin_step();
  void send_pose(const PoseMessage& msg);
  // non-pose payloads (landmark sets, test injections) only account bytes
  void send_payload(int sender, int bytes, const std::string& label);

  std::vector<PoseMessage> inbox(int recipient) const;  // everything from other senders
  int bytes_used(int sender) const;
  int budget() const { return budget_; }

 private:
  void charge(int sender, int bytes, const std::string& label);

  int budget_;
  std::vector<int> used_;
  std::vector<PoseMessage> messages_;
};

struct AgentState {
  int id = 0;                    // 1-based
  Pose2D pose;                   // ground truth, world frame
  Pose2D estimated_pose;         // map (local) frame; SLAM is the only corrector
  RigidTransform2D frame;        // local -> world, fixed at spawn
  SlamMap slam;
  CoverageMap coverage;
  TargetState target;
  bool target_valid = false;
  double target_set_time = 0.0;
  PointSet landmarks;
  std::map<int, RigidTransform2D> neighbor_transforms;  // their frame -> this frame
  Rng rng{0};
};

// per-agent pose broadcast + inbox collection for one step
std::vector<std::vector<PoseMessage>> broadcast_and_collect(const std::vector<AgentState>& agents,
                                                            MessageBus& bus, int time_index,
                                                            BroadcastMode mode);

struct TrajectorySample {
  double t = 0.0;
  Pose2D truth;     // world frame
  Pose2D estimate;  // local frame
};

struct CoverageSample {
  double t = 0.0;
  int agent_id = 0;
  double pct = 0.0;
};

struct MapSnapshot {
  int step = 0;
  int agent_id = 0;
  SlamMap slam;
  CoverageMap coverage;
};

struct SyncRecord {
  double t = 0.0;
  int source_id = 0;
  int target_id = 0;
  double theta = 0.0;
  Vec2 translation;
  int iterations = 0;
  double mean_residual = 0.0;
};

struct MissionLog {
  std::string config_snapshot;
  int agent_count = 0;
  std::vector<std::vector<TrajectorySample>> trajectories;  // per agent
  std::vector<CoverageSample> coverage;
  std::vector<MapSnapshot> snapshots;
  std::vector<SyncRecord> sync_records;
  std::vector<PointSet> final_landmarks;

  void write(const std::string& dir) const;
};

// Two-phase mission: a hold-in-place sync phase that builds the first maps
// and aligns the agents pairwise, then the explore/control loop with
// sense -> localize -> communicate -> plan -> act stages per step.
MissionLog run_mission(const SimConfig& config, const EnvironmentMap& env);

}  // namespace swarmsim
