#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <sstream>

#include "swarmsim/bench.hpp"
#include "swarmsim/config.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/explore.hpp"
#include "swarmsim/icp.hpp"
#include "swarmsim/io.hpp"
#include "swarmsim/slam.hpp"
#include "swarmsim/stability.hpp"
#include "swarmsim/swarm.hpp"
#include "swarmsim/world.hpp"

namespace py = pybind11;
using namespace swarmsim;

namespace {

py::bytes grid_bytes(const ByteGrid& grid) {
  const auto& cells = grid.cells();
  return py::bytes(reinterpret_cast<const char*>(cells.data()), cells.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "deterministic multi-agent indoor exploration simulator";

  // ---- errors ----
  auto sim_error = py::register_exception<SimError>(m, "SimError");
  py::register_exception<InvalidPoseError>(m, "InvalidPoseError", sim_error);
  py::register_exception<ConfigError>(m, "ConfigError", sim_error);
  py::register_exception<NoCorrespondenceError>(m, "NoCorrespondenceError", sim_error);
  py::register_exception<DegenerateConfigurationError>(m, "DegenerateConfigurationError",
                                                       sim_error);
  py::register_exception<BandwidthViolationError>(m, "BandwidthViolationError", sim_error);
  py::register_exception<MissionTimeExhaustedError>(m, "MissionTimeExhaustedError", sim_error);
  py::register_exception<ExcludedInitialConditionError>(m, "ExcludedInitialConditionError",
                                                        sim_error);
  py::register_exception<SyncFailureError>(m, "SyncFailureError", sim_error);

  // ---- geometry ----
  py::class_<Vec2>(m, "Vec2")
      .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y)
      .def("dot", &Vec2::dot)
      .def("norm", &Vec2::norm)
      .def("squared_norm", &Vec2::squared_norm)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * double())
      .def(double() * py::self)
      .def(py::self / double())
      .def(-py::self)
      .def(py::self == py::self)
      .def("__repr__", [](const Vec2& v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "Vec2(%g, %g)", v.x, v.y);
        return std::string(buf);
      });

  py::class_<Pose2D>(m, "Pose2D")
      .def(py::init([](const Vec2& position, double theta) {
             return Pose2D{position, theta};
           }),
           py::arg("position") = Vec2{}, py::arg("theta") = 0.0)
      .def_readwrite("position", &Pose2D::position)
      .def_readwrite("theta", &Pose2D::theta)
      .def("__repr__", [](const Pose2D& p) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "Pose2D(Vec2(%g, %g), %g)", p.position.x, p.position.y,
                      p.theta);
        return std::string(buf);
      });

  py::class_<RigidTransform2D>(m, "RigidTransform2D")
      .def(py::init([](double theta, const Vec2& t) {
             return RigidTransform2D{theta, t};
           }),
           py::arg("theta") = 0.0, py::arg("t") = Vec2{})
      .def_readwrite("theta", &RigidTransform2D::theta)
      .def_readwrite("t", &RigidTransform2D::t)
      .def("apply", py::overload_cast<const Vec2&>(&RigidTransform2D::apply, py::const_))
      .def("apply", py::overload_cast<const Pose2D&>(&RigidTransform2D::apply, py::const_))
      .def("inverse", &RigidTransform2D::inverse)
      .def("__repr__", [](const RigidTransform2D& tf) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "RigidTransform2D(%g, Vec2(%g, %g))", tf.theta, tf.t.x,
                      tf.t.y);
        return std::string(buf);
      });

  m.def("compose", &compose, py::arg("second"), py::arg("first"));
  m.def("wrap_angle", &wrap_angle);
  m.def("heading_vector", &heading_vector);
  m.def("rotate", &rotate);

  // ---- rng ----
  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("for_agent", &Rng::for_agent, py::arg("seed"), py::arg("agent_id"))
      .def("next_u64", &Rng::next_u64)
      .def("uniform", py::overload_cast<>(&Rng::uniform))
      .def("uniform", py::overload_cast<double, double>(&Rng::uniform))
      .def("uniform_int", &Rng::uniform_int)
      .def("normal", py::overload_cast<>(&Rng::normal))
      .def("normal", py::overload_cast<double, double>(&Rng::normal))
      .def("unit_vector", &Rng::unit_vector);

  // ---- world ----
  py::class_<EnvironmentMap>(m, "EnvironmentMap")
      .def(py::init<int, int, double>(), py::arg("width_cells"), py::arg("height_cells"),
           py::arg("resolution"))
      .def_static("load", &EnvironmentMap::load, py::arg("path"))
      .def_static(
          "from_text",
          [](const std::string& text, const std::string& name) {
            std::istringstream in(text);
            return EnvironmentMap::parse(in, name);
          },
          py::arg("text"), py::arg("name") = "<text>")
      .def_property_readonly("width_cells", &EnvironmentMap::width_cells)
      .def_property_readonly("height_cells", &EnvironmentMap::height_cells)
      .def_property_readonly("resolution", &EnvironmentMap::resolution)
      .def_property_readonly("width_m", &EnvironmentMap::width_m)
      .def_property_readonly("height_m", &EnvironmentMap::height_m)
      .def("occupied", &EnvironmentMap::occupied)
      .def("set_occupied", &EnvironmentMap::set_occupied)
      .def("occupied_at", &EnvironmentMap::occupied_at)
      .def("contains", &EnvironmentMap::contains)
      .def("boundary_closed", &EnvironmentMap::boundary_closed);

  py::class_<LidarScan>(m, "LidarScan")
      .def(py::init<>())
      .def_readwrite("beam_angles", &LidarScan::beam_angles)
      .def_readwrite("ranges", &LidarScan::ranges)
      .def_readwrite("hit_flags", &LidarScan::hit_flags)
      .def_readwrite("max_range", &LidarScan::max_range)
      .def("__len__", &LidarScan::size);

  py::class_<CameraParams>(m, "CameraParams")
      .def(py::init<>())
      .def_readwrite("r_c", &CameraParams::r_c)
      .def_readwrite("width", &CameraParams::width)
      .def_readwrite("length", &CameraParams::length);

  py::class_<FovRectangle>(m, "FovRectangle")
      .def(py::init<>())
      .def_readwrite("center", &FovRectangle::center)
      .def_readwrite("v1", &FovRectangle::v1)
      .def_readwrite("v2", &FovRectangle::v2)
      .def_readwrite("width", &FovRectangle::width)
      .def_readwrite("length", &FovRectangle::length);

  py::class_<SaturationLimits>(m, "SaturationLimits")
      .def(py::init<>())
      .def_readwrite("s_x", &SaturationLimits::s_x)
      .def_readwrite("s_theta", &SaturationLimits::s_theta);

  m.def("raycast", &raycast, py::arg("env"), py::arg("pose"), py::arg("beam_angles"),
        py::arg("max_range"));
  m.def("camera_fov", &camera_fov, py::arg("pose"), py::arg("camera"));
  m.def("point_in_fov", &point_in_fov, py::arg("fov"), py::arg("point"));
  m.def("step_kinematics", &step_kinematics, py::arg("pose"), py::arg("u_x"),
        py::arg("u_theta"), py::arg("dt"), py::arg("limits"));

  // ---- slam ----
  m.attr("SLAM_UNKNOWN") = kSlamUnknown;

  py::class_<SlamMap>(m, "SlamMap")
      .def(py::init<int, double, Vec2>(), py::arg("size_cells") = 100,
           py::arg("resolution") = 0.1, py::arg("origin") = Vec2{})
      .def_property_readonly("size_cells", &SlamMap::size_cells)
      .def_property_readonly("resolution", &SlamMap::resolution)
      .def_property_readonly("origin", &SlamMap::origin)
      .def("at", &SlamMap::at)
      .def("set", &SlamMap::set)
      .def("cell_center", &SlamMap::cell_center)
      .def("cells", [](const SlamMap& sm) { return grid_bytes(sm.grid()); },
           "row-major cell values from the minimum corner")
      .def("pgm", [](const SlamMap& sm) { return py::bytes(pgm_bytes(sm.grid())); })
      .def(py::self == py::self);

  py::class_<SlamParams>(m, "SlamParams")
      .def(py::init<>())
      .def_readwrite("alpha", &SlamParams::alpha)
      .def_readwrite("hole_width", &SlamParams::hole_width)
      .def_readwrite("quality_threshold", &SlamParams::quality_threshold);

  py::class_<ScanMatchParams>(m, "ScanMatchParams")
      .def(py::init<>())
      .def_readwrite("iterations", &ScanMatchParams::iterations)
      .def_readwrite("sigma_xy", &ScanMatchParams::sigma_xy)
      .def_readwrite("sigma_theta", &ScanMatchParams::sigma_theta)
      .def_readwrite("max_offset_xy", &ScanMatchParams::max_offset_xy)
      .def_readwrite("max_offset_theta", &ScanMatchParams::max_offset_theta);

  m.def("cell_update", &cell_update, py::arg("old_value"), py::arg("y"), py::arg("alpha"));
  m.def("update_map", &update_map, py::arg("map"), py::arg("pose"), py::arg("scan"),
        py::arg("params"));
  m.def("scan_cost", &scan_cost, py::arg("map"), py::arg("scan"), py::arg("pose"));
  m.def("endpoint_values", &endpoint_values, py::arg("map"), py::arg("scan"), py::arg("pose"));
  m.def("scan_match", &scan_match, py::arg("map"), py::arg("scan"), py::arg("initial"),
        py::arg("params"), py::arg("rng"));
  m.def("fuse_poses", &fuse_poses, py::arg("odometry"), py::arg("matched"), py::arg("beta"));

  // ---- icp ----
  py::class_<PointSet>(m, "PointSet")
      .def(py::init<>())
      .def(py::init([](std::vector<Vec2> points, int owner) {
             return PointSet{std::move(points), owner};
           }),
           py::arg("points"), py::arg("owner") = -1)
      .def_readwrite("points", &PointSet::points)
      .def_readwrite("owner", &PointSet::owner)
      .def("__len__", [](const PointSet& s) { return s.points.size(); });

  py::class_<MatchPair>(m, "MatchPair")
      .def_readonly("source_index", &MatchPair::source_index)
      .def_readonly("target_index", &MatchPair::target_index)
      .def_readonly("distance", &MatchPair::distance);

  py::class_<IcpParams>(m, "IcpParams")
      .def(py::init<>())
      .def_readwrite("match_tolerance", &IcpParams::match_tolerance)
      .def_readwrite("max_iterations", &IcpParams::max_iterations)
      .def_readwrite("convergence_eps", &IcpParams::convergence_eps);

  py::class_<IcpResult>(m, "IcpResult")
      .def_readonly("transform", &IcpResult::transform)
      .def_readonly("iterations", &IcpResult::iterations)
      .def_readonly("mean_residual", &IcpResult::mean_residual)
      .def_readonly("converged", &IcpResult::converged);

  m.def("extract_landmarks", &extract_landmarks, py::arg("map"),
        py::arg("occupied_threshold"), py::arg("min_spacing"));
  m.def("match_points", &match_points, py::arg("source"), py::arg("target"),
        py::arg("tolerance"));
  m.def("solve_transform", &solve_transform, py::arg("pairs"));
  m.def("icp", &icp, py::arg("source"), py::arg("target"),
        py::arg("initial") = RigidTransform2D{}, py::arg("params") = IcpParams{});
  m.def("chain_transforms", &chain_transforms, py::arg("chain"));

  py::class_<IcpBenchParams>(m, "IcpBenchParams")
      .def(py::init<>())
      .def_readwrite("trials", &IcpBenchParams::trials)
      .def_readwrite("min_landmarks", &IcpBenchParams::min_landmarks)
      .def_readwrite("max_landmarks", &IcpBenchParams::max_landmarks)
      .def_readwrite("cloud_extent", &IcpBenchParams::cloud_extent)
      .def_readwrite("min_point_spacing", &IcpBenchParams::min_point_spacing)
      .def_readwrite("max_rotation", &IcpBenchParams::max_rotation)
      .def_readwrite("max_translation", &IcpBenchParams::max_translation)
      .def_readwrite("noise_sigma", &IcpBenchParams::noise_sigma)
      .def_readwrite("rotation_tol", &IcpBenchParams::rotation_tol)
      .def_readwrite("translation_tol", &IcpBenchParams::translation_tol)
      .def_readwrite("icp", &IcpBenchParams::icp);

  py::class_<IcpBenchTrial>(m, "IcpBenchTrial")
      .def_readonly("rot_error", &IcpBenchTrial::rot_error)
      .def_readonly("trans_error", &IcpBenchTrial::trans_error)
      .def_readonly("iterations", &IcpBenchTrial::iterations)
      .def_readonly("converged", &IcpBenchTrial::converged)
      .def_readonly("skipped_degenerate", &IcpBenchTrial::skipped_degenerate)
      .def_readonly("success", &IcpBenchTrial::success);

  py::class_<IcpBenchReport>(m, "IcpBenchReport")
      .def_readonly("trials", &IcpBenchReport::trials)
      .def_readonly("num_success", &IcpBenchReport::num_success)
      .def_readonly("num_skipped", &IcpBenchReport::num_skipped)
      .def_readonly("max_rot_error", &IcpBenchReport::max_rot_error)
      .def_readonly("max_trans_error", &IcpBenchReport::max_trans_error)
      .def_readonly("elapsed_seconds", &IcpBenchReport::elapsed_seconds)
      .def("success_rate", &IcpBenchReport::success_rate);

  m.def("run_icp_bench", &run_icp_bench, py::arg("params"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  // ---- exploration and control ----
  py::class_<CoverageMap>(m, "CoverageMap")
      .def(py::init<int, double, Vec2>(), py::arg("size_cells") = 100,
           py::arg("resolution") = 0.1, py::arg("origin") = Vec2{})
      .def_property_readonly("size_cells", &CoverageMap::size_cells)
      .def_property_readonly("resolution", &CoverageMap::resolution)
      .def_property_readonly("origin", &CoverageMap::origin)
      .def("at", &CoverageMap::at)
      .def("set", &CoverageMap::set)
      .def("cell_center", &CoverageMap::cell_center)
      .def("cells", [](const CoverageMap& cm) { return grid_bytes(cm.grid()); },
           "row-major cell values from the minimum corner")
      .def("pgm", [](const CoverageMap& cm) { return py::bytes(pgm_bytes(cm.grid())); })
      .def(py::self == py::self);

  py::class_<ExploreParams>(m, "ExploreParams")
      .def(py::init<>())
      .def_readwrite("lambda_", &ExploreParams::lambda)
      .def_readwrite("sigma1", &ExploreParams::sigma1)
      .def_readwrite("sigma2", &ExploreParams::sigma2)
      .def_readwrite("delta_t", &ExploreParams::delta_t);

  py::class_<ControlGains>(m, "ControlGains")
      .def(py::init<>())
      .def_readwrite("k_c", &ControlGains::k_c)
      .def_readwrite("k_s", &ControlGains::k_s)
      .def_readwrite("k_t", &ControlGains::k_t)
      .def_readwrite("k_theta", &ControlGains::k_theta);

  py::class_<TargetState>(m, "TargetState")
      .def(py::init<>())
      .def_readwrite("current", &TargetState::current)
      .def_readwrite("previous", &TargetState::previous)
      .def_readwrite("theta_d", &TargetState::theta_d);

  py::class_<ErrorState>(m, "ErrorState")
      .def(py::init([](const Vec2& e_c, double e_theta) {
             return ErrorState{e_c, e_theta};
           }),
           py::arg("e_c") = Vec2{}, py::arg("e_theta") = 0.0)
      .def_readwrite("e_c", &ErrorState::e_c)
      .def_readwrite("e_theta", &ErrorState::e_theta);

  py::class_<ErrorDerivative>(m, "ErrorDerivative")
      .def_readonly("e_c_dot", &ErrorDerivative::e_c_dot)
      .def_readonly("e_theta_dot", &ErrorDerivative::e_theta_dot);

  m.def("stamp_coverage", &stamp_coverage, py::arg("map"), py::arg("fovs"), py::arg("k"));
  m.def("coverage_percentage", &coverage_percentage, py::arg("map"));
  m.def("select_target", &select_target, py::arg("map"), py::arg("t"),
        py::arg("camera_center"), py::arg("target"), py::arg("params"),
        py::arg("occupancy") = static_cast<const SlamMap*>(nullptr));
  m.def("position_control", &position_control, py::arg("error"), py::arg("gains"));
  m.def("heading_control", &heading_control, py::arg("e_theta"), py::arg("k_theta"));
  m.def("desired_heading", &desired_heading, py::arg("e_c"));
  m.def("error_dynamics", &error_dynamics, py::arg("error"), py::arg("theta_d"),
        py::arg("gains"), py::arg("r_c"));
  m.def("avoidance_velocity", &avoidance_velocity, py::arg("pose"), py::arg("others"),
        py::arg("obstacles"), py::arg("d_safe"), py::arg("k_rep"), py::arg("rng"));

  // ---- stability ----
  py::class_<StabilityTrialParams>(m, "StabilityTrialParams")
      .def(py::init<>())
      .def_readwrite("gains", &StabilityTrialParams::gains)
      .def_readwrite("r_c", &StabilityTrialParams::r_c)
      .def_readwrite("dt", &StabilityTrialParams::dt)
      .def_readwrite("duration", &StabilityTrialParams::duration)
      .def_readwrite("tol_position", &StabilityTrialParams::tol_position)
      .def_readwrite("tol_heading", &StabilityTrialParams::tol_heading)
      .def_readwrite("delta", &StabilityTrialParams::delta)
      .def_readwrite("init_radius", &StabilityTrialParams::init_radius)
      .def_readwrite("heading_exclusion", &StabilityTrialParams::heading_exclusion);

  py::class_<StabilityTrial>(m, "StabilityTrial")
      .def_readonly("initial", &StabilityTrial::initial)
      .def_readonly("theta_d", &StabilityTrial::theta_d)
      .def_readonly("final_ec_norm", &StabilityTrial::final_ec_norm)
      .def_readonly("final_etheta", &StabilityTrial::final_etheta)
      .def_readonly("time_to_converge", &StabilityTrial::time_to_converge)
      .def_readonly("converged", &StabilityTrial::converged)
      .def_readonly("bound_started", &StabilityTrial::bound_started)
      .def_readonly("max_bound_excess", &StabilityTrial::max_bound_excess)
      .def_readonly("w_final", &StabilityTrial::w_final);

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("trials", &StabilityReport::trials)
      .def_readonly("num_converged", &StabilityReport::num_converged)
      .def_readonly("max_final_ec", &StabilityReport::max_final_ec)
      .def_readonly("max_final_etheta", &StabilityReport::max_final_etheta)
      .def_readonly("max_bound_excess", &StabilityReport::max_bound_excess)
      .def_readonly("w_limit_formula", &StabilityReport::w_limit_formula)
      .def_readonly("max_w_limit_gap", &StabilityReport::max_w_limit_gap)
      .def_readonly("elapsed_seconds", &StabilityReport::elapsed_seconds)
      .def("all_converged", &StabilityReport::all_converged);

  m.def("rk4_error_step", &rk4_error_step, py::arg("error"), py::arg("theta_d"),
        py::arg("gains"), py::arg("r_c"), py::arg("dt"));
  m.def("bound_derivative", &bound_derivative, py::arg("w"), py::arg("gains"), py::arg("r_c"),
        py::arg("delta"));
  m.def("bound_limit", &bound_limit, py::arg("gains"), py::arg("r_c"), py::arg("delta"));
  m.def("run_stability_trial", &run_stability_trial, py::arg("initial"), py::arg("theta_d"),
        py::arg("params"),
        py::arg("on_step") = std::function<void(double, const ErrorState&)>{});
  m.def("verify_stability", &verify_stability, py::arg("params"), py::arg("trials"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());

  // ---- swarm mission ----
  py::enum_<BroadcastMode>(m, "BroadcastMode")
      .value("all", BroadcastMode::all)
      .value("chain", BroadcastMode::chain);

  py::class_<WorldParams>(m, "WorldParams")
      .def(py::init<>())
      .def_readwrite("beam_angles", &WorldParams::beam_angles)
      .def_readwrite("max_range", &WorldParams::max_range)
      .def_readwrite("range_noise_sigma", &WorldParams::range_noise_sigma)
      .def_readwrite("camera", &WorldParams::camera)
      .def_readwrite("limits", &WorldParams::limits)
      .def_readwrite("odom_noise_xy", &WorldParams::odom_noise_xy)
      .def_readwrite("odom_noise_theta", &WorldParams::odom_noise_theta);

  py::class_<AvoidanceParams>(m, "AvoidanceParams")
      .def(py::init<>())
      .def_readwrite("enabled", &AvoidanceParams::enabled)
      .def_readwrite("d_safe", &AvoidanceParams::d_safe)
      .def_readwrite("k_rep", &AvoidanceParams::k_rep);

  py::class_<SwarmParams>(m, "SwarmParams")
      .def(py::init<>())
      .def_readwrite("broadcast_budget", &SwarmParams::broadcast_budget)
      .def_readwrite("mode", &SwarmParams::mode);

  py::class_<MissionParams>(m, "MissionParams")
      .def(py::init<>())
      .def_readwrite("dt", &MissionParams::dt)
      .def_readwrite("duration", &MissionParams::duration)
      .def_readwrite("sync_duration", &MissionParams::sync_duration)
      .def_readwrite("log_period", &MissionParams::log_period)
      .def_readwrite("snapshot_period", &MissionParams::snapshot_period);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("scenario_path", &SimConfig::scenario_path)
      .def_readwrite("agent_count", &SimConfig::agent_count)
      .def_readwrite("initial_poses", &SimConfig::initial_poses)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("world", &SimConfig::world)
      .def_readwrite("slam", &SimConfig::slam)
      .def_readwrite("map_size_cells", &SimConfig::map_size_cells)
      .def_readwrite("map_resolution", &SimConfig::map_resolution)
      .def_readwrite("scan_match", &SimConfig::scan_match)
      .def_readwrite("fusion_beta", &SimConfig::fusion_beta)
      .def_readwrite("fusion_min_improvement", &SimConfig::fusion_min_improvement)
      .def_readwrite("icp", &SimConfig::icp)
      .def_readwrite("occupied_threshold", &SimConfig::occupied_threshold)
      .def_readwrite("landmark_spacing", &SimConfig::landmark_spacing)
      .def_readwrite("resync_period", &SimConfig::resync_period)
      .def_readwrite("explore", &SimConfig::explore)
      .def_readwrite("coverage_size_cells", &SimConfig::coverage_size_cells)
      .def_readwrite("coverage_resolution", &SimConfig::coverage_resolution)
      .def_readwrite("exclude_occupied_targets", &SimConfig::exclude_occupied_targets)
      .def_readwrite("target_timeout", &SimConfig::target_timeout)
      .def_readwrite("gains", &SimConfig::gains)
      .def_readwrite("avoidance", &SimConfig::avoidance)
      .def_readwrite("swarm", &SimConfig::swarm)
      .def_readwrite("mission", &SimConfig::mission)
      .def_readwrite("use_ground_truth_transforms", &SimConfig::use_ground_truth_transforms);

  py::class_<PoseMessage>(m, "PoseMessage")
      .def(py::init<>())
      .def_readwrite("sender", &PoseMessage::sender)
      .def_readwrite("pose", &PoseMessage::pose)
      .def_readwrite("time_index", &PoseMessage::time_index);

  m.attr("POSE_MESSAGE_BYTES") = kPoseMessageBytes;
  m.attr("LANDMARK_POINT_BYTES") = kLandmarkPointBytes;

  py::class_<MessageBus>(m, "MessageBus")
      .def(py::init<int, int>(), py::arg("byte_budget"), py::arg("agent_count"))
      .def("begin_step", &MessageBus::begin_step)
      .def("send_pose", &MessageBus::send_pose)
      .def("send_payload", &MessageBus::send_payload, py::arg("sender"), py::arg("bytes"),
           py::arg("label"))
      .def("inbox", &MessageBus::inbox, py::arg("recipient"))
      .def("bytes_used", &MessageBus::bytes_used, py::arg("sender"))
      .def_property_readonly("budget", &MessageBus::budget);

  py::class_<TrajectorySample>(m, "TrajectorySample")
      .def_readonly("t", &TrajectorySample::t)
      .def_readonly("truth", &TrajectorySample::truth)
      .def_readonly("estimate", &TrajectorySample::estimate);

  py::class_<CoverageSample>(m, "CoverageSample")
      .def_readonly("t", &CoverageSample::t)
      .def_readonly("agent_id", &CoverageSample::agent_id)
      .def_readonly("pct", &CoverageSample::pct);

  py::class_<MapSnapshot>(m, "MapSnapshot")
      .def_readonly("step", &MapSnapshot::step)
      .def_readonly("agent_id", &MapSnapshot::agent_id)
      .def_readonly("slam", &MapSnapshot::slam)
      .def_readonly("coverage", &MapSnapshot::coverage);

  py::class_<SyncRecord>(m, "SyncRecord")
      .def_readonly("t", &SyncRecord::t)
      .def_readonly("source_id", &SyncRecord::source_id)
      .def_readonly("target_id", &SyncRecord::target_id)
      .def_readonly("theta", &SyncRecord::theta)
      .def_readonly("translation", &SyncRecord::translation)
      .def_readonly("iterations", &SyncRecord::iterations)
      .def_readonly("mean_residual", &SyncRecord::mean_residual);

  py::class_<MissionLog>(m, "MissionLog")
      .def_readonly("config_snapshot", &MissionLog::config_snapshot)
      .def_readonly("agent_count", &MissionLog::agent_count)
      .def_readonly("trajectories", &MissionLog::trajectories)
      .def_readonly("coverage", &MissionLog::coverage)
      .def_readonly("snapshots", &MissionLog::snapshots)
      .def_readonly("sync_records", &MissionLog::sync_records)
      .def_readonly("final_landmarks", &MissionLog::final_landmarks)
      .def("write", &MissionLog::write, py::arg("dir"));

  m.def("run_mission", &run_mission, py::arg("config"), py::arg("env"),
        py::call_guard<py::gil_scoped_release>());

  // ---- config ----
  m.def("default_config_text", &default_config_text);
  m.def("parse_config_text", &parse_config_text, py::arg("text"), py::arg("name"));
  m.def(
      "load_config",
      [](const std::string& path, const std::optional<std::string>& scenario,
         const std::optional<std::uint64_t>& seed) {
        std::string snapshot;
        SimConfig config = load_config(path, scenario, seed, &snapshot);
        return py::make_tuple(config, snapshot);
      },
      py::arg("path") = "", py::arg("scenario") = py::none(), py::arg("seed") = py::none(),
      "returns (config, snapshot_text); the snapshot replays the run when parsed back");
}
