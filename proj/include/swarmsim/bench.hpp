#pragma once

#include <cstdint>
#include <vector>

#include "swarmsim/icp.hpp"

namespace swarmsim {

// Randomized transform-recovery harness: draws landmark clouds, applies a
// random rigid motion plus per-point noise, and checks that icp() recovers it.
struct IcpBenchParams {
  int trials = 200;
  int min_landmarks = 30;
  int max_landmarks = 50;
  double cloud_extent = 6.0;        // points are drawn in a square of this side
  double min_point_spacing = 0.3;   // rejection-sampled spacing inside a cloud
  double max_rotation = 30.0 * kPi / 180.0;
  double max_translation = 0.5;
  double noise_sigma = 0.02;
  double rotation_tol = 2.0 * kPi / 180.0;
  double translation_tol = 0.05;
  IcpParams icp;
};

struct IcpBenchTrial {
  double rot_error = 0.0;    // |recovered theta - true theta|, radians
  double trans_error = 0.0;  // recovered translation error, meters
  int iterations = 0;
  bool converged = false;
  bool skipped_degenerate = false;
  bool success = false;
};

struct IcpBenchReport {
  std::vector<IcpBenchTrial> trials;
  int num_success = 0;
  int num_skipped = 0;
  double max_rot_error = 0.0;
  double max_trans_error = 0.0;
  double elapsed_seconds = 0.0;
  double success_rate() const;  // over non-skipped trials
};

IcpBenchReport run_icp_bench(const IcpBenchParams& params, std::uint64_t seed);

}  // namespace swarmsim
