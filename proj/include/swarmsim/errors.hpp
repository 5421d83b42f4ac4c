#pragma once

#include <stdexcept>
#include <string>

namespace swarmsim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// raycast / kinematics preconditions (pose outside the map, inside a wall, ...)
struct InvalidPoseError : SimError {
  using SimError::SimError;
};

// scenario / config file problems; the CLI maps these to exit code 2
struct ConfigError : SimError {
  using SimError::SimError;
};

// point matching produced no surviving pairs
struct NoCorrespondenceError : SimError {
  explicit NoCorrespondenceError(const std::string& what, int iteration = -1)
      : SimError(what), iteration(iteration) {}
  int iteration;  // -1 when raised outside the icp loop
};

// H11+H22 = H12-H21 = 0, rotation undefined
struct DegenerateConfigurationError : SimError {
  using SimError::SimError;
};

// a step's outgoing payload exceeded the per-agent byte budget
struct BandwidthViolationError : SimError {
  using SimError::SimError;
};

// coverage time index ran past 255
struct MissionTimeExhaustedError : SimError {
  using SimError::SimError;
};

// error dynamics evaluated at e_theta = pi
struct ExcludedInitialConditionError : SimError {
  using SimError::SimError;
};

// initial inter-map alignment failed; the CLI maps this to exit code 3
struct SyncFailureError : SimError {
  using SimError::SimError;
};

}  // namespace swarmsim
