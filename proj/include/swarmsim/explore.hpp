#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swarmsim/grid.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/slam.hpp"
#include "swarmsim/world.hpp"

namespace swarmsim {

// Timestamped coverage grid: 0 = never seen, otherwise the time index
// (1..255) of the last sighting.
class CoverageMap {
 public:
  explicit CoverageMap(int size_cells = 100, double resolution = 0.1, Vec2 origin = {})
      : grid_(size_cells, size_cells, resolution, origin, 0) {}

  int size_cells() const { return grid_.width_cells(); }
  double resolution() const { return grid_.resolution(); }
  Vec2 origin() const { return grid_.origin(); }

  std::uint8_t at(int ix, int iy) const { return grid_.at(ix, iy); }
  void set(int ix, int iy, std::uint8_t v) { grid_.set(ix, iy, v); }
  Vec2 cell_center(int ix, int iy) const { return grid_.cell_center(ix, iy); }
  bool cell_of(const Vec2& p, int& ix, int& iy) const { return grid_.cell_of(p, ix, iy); }
  const ByteGrid& grid() const { return grid_; }

  bool operator==(const CoverageMap& o) const = default;

 private:
  ByteGrid grid_;
};

struct ExploreParams {
  double lambda = 0.5;   // 1 = pure staleness, 0 = pure proximity weighting
  double sigma1 = 0.3;   // 1/m, decay toward the current footprint center
  double sigma2 = 0.1;   // 1/m, decay toward the previous target
  double delta_t = 1.0;  // seconds per coverage time index
};

struct ControlGains {
  double k_c = 0.5;
  double k_s = 2.0;
  double k_t = 1.0;
  double k_theta = 1.0;
};

struct TargetState {
  Vec2 current;
  Vec2 previous;
  double theta_d = 0.0;
};

struct ErrorState {
  Vec2 e_c;            // target minus footprint center
  double e_theta = 0.0;  // desired minus actual heading, (-pi, pi]
};

struct ErrorDerivative {
  Vec2 e_c_dot;
  double e_theta_dot = 0.0;
};

// Stamps every cell whose center lies in one of the footprints with time
// index k (1..255). Throws MissionTimeExhaustedError when k > 255.
void stamp_coverage(CoverageMap& map, const std::vector<FovRectangle>& fovs, int k);

// percentage of cells seen at least once
double coverage_percentage(const CoverageMap& map);

// Scores every cell center by staleness (t - delta_t * value) weighted by
// lambda + (1 - lambda) * exp(-sigma1 |y - x_c| - sigma2 |y - previous|),
// returning the highest-scoring center. Ties break toward the lowest
// (row, column) index. When an occupancy map is supplied, only cells it has
// seen free (value above kSlamUnknown) are considered, which keeps targets
// out of walls and unreachable space; if nothing qualifies yet the filter is
// dropped for that call.
Vec2 select_target(const CoverageMap& map, double t, const Vec2& camera_center,
                   const TargetState& target, const ExploreParams& params,
                   const SlamMap* occupancy = nullptr);

// Saturating attraction toward the target, gated by the heading error:
// k_c sech^2(k_s e_theta) tanh(k_t |e_c|) e_c / |e_c|, with value 0 at e_c = 0.
Vec2 position_control(const ErrorState& e, const ControlGains& gains);

// k_theta sin(e)/sqrt(1 + cos(e)); equals k_theta*sqrt(2)*sin(e/2) on
// (-pi, pi), continued with k_theta*sqrt(2) at e = pi.
double heading_control(double e_theta, double k_theta);

// atan2 of the position error; empty when |e_c| = 0 (keep current heading)
std::optional<double> desired_heading(const Vec2& e_c);

// Closed-loop error derivatives for a fixed target and constant theta_d.
// Throws ExcludedInitialConditionError at e_theta = pi.
ErrorDerivative error_dynamics(const ErrorState& e, double theta_d, const ControlGains& gains,
                               double r_c);

// Potential-field repulsion away from neighbors and scan returns closer than
// d_safe. A coincident neighbor repels at the 1 cm floor distance along a
// random direction.
Vec2 avoidance_velocity(const Pose2D& pose, const std::vector<Vec2>& others,
                        const LidarScan& obstacles, double d_safe, double k_rep, Rng& rng);

}  // namespace swarmsim
