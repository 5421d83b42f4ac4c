#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "swarmsim/geometry.hpp"
#include "swarmsim/slam.hpp"

namespace swarmsim {

struct PointSet {
  std::vector<Vec2> points;
  int owner = -1;  // agent id, informational
};

struct MatchPair {
  int source_index;
  int target_index;
  double distance;
};

struct IcpParams {
  double match_tolerance = 1.0;   // meters, pairs beyond this are dropped
  int max_iterations = 50;
  double convergence_eps = 1e-4;  // on the incremental rotation and translation
};

struct IcpResult {
  RigidTransform2D transform;  // maps source-frame coordinates into the target frame
  int iterations = 0;
  double mean_residual = 0.0;  // mean pair distance after the final alignment
  bool converged = false;
};

// Decimates a map's occupied cells (value <= occupied_threshold) into a sparse
// landmark set: row-major scan, a cell center is kept only when no already
// kept point lies within min_spacing.
PointSet extract_landmarks(const SlamMap& map, std::uint8_t occupied_threshold,
                           double min_spacing);

// Nearest-neighbor pairs from each source point into the target set; pairs
// farther than tolerance are dropped. Throws NoCorrespondenceError when
// nothing survives.
std::vector<MatchPair> match_points(const PointSet& source, const PointSet& target,
                                    double tolerance);

// Closed-form least-squares rigid motion q ~= R(theta) p + t over the pairs.
// Throws DegenerateConfigurationError when the rotation is undefined.
RigidTransform2D solve_transform(const std::vector<std::pair<Vec2, Vec2>>& pairs);

// Iterative alignment of source onto target starting from `initial`.
IcpResult icp(const PointSet& source, const PointSet& target, const RigidTransform2D& initial,
              const IcpParams& params);

// T_n o ... o T_1; identity for an empty chain.
RigidTransform2D chain_transforms(const std::vector<RigidTransform2D>& chain);

}  // namespace swarmsim
