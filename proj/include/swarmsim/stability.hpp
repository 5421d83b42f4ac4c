#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "swarmsim/explore.hpp"

namespace swarmsim {

struct StabilityTrialParams {
  ControlGains gains;
  double r_c = 0.2;
  double dt = 1e-3;
  double duration = 120.0;
  double tol_position = 1e-2;  // final |e_c| must drop below this
  double tol_heading = 1e-3;   // final |e_theta| must drop below this
  double delta = 0.05;         // heading band for the comparison bound
  double init_radius = 5.0;    // |e_c(0)| is drawn within this radius
  double heading_exclusion = 0.05;  // keep |e_theta(0) - pi| at least this
};

struct StabilityTrial {
  ErrorState initial;
  double theta_d = 0.0;
  double final_ec_norm = 0.0;
  double final_etheta = 0.0;
  double time_to_converge = -1.0;  // -1 when the tolerances were never met
  bool converged = false;
  // comparison bound bookkeeping
  bool bound_started = false;    // |e_theta| entered the delta band
  double max_bound_excess = 0.0;  // max of V - W after that time
  double w_final = 0.0;
};

struct StabilityReport {
  std::vector<StabilityTrial> trials;
  int num_converged = 0;
  double max_final_ec = 0.0;
  double max_final_etheta = 0.0;
  double max_bound_excess = 0.0;  // across trials that entered the band
  double w_limit_formula = 0.0;   // (1/k_t) atanh(k_theta r_c delta / (sqrt(2) k_c))
  double max_w_limit_gap = 0.0;   // |W(T_end) - formula| worst case
  double elapsed_seconds = 0.0;
  bool all_converged() const { return num_converged == static_cast<int>(trials.size()); }
};

// One RK4 step of the closed-loop error dynamics with fixed theta_d.
ErrorState rk4_error_step(const ErrorState& e, double theta_d, const ControlGains& gains,
                          double r_c, double dt);

// Comparison-bound derivative: -(k_c/2) tanh(k_t w) + (k_theta r_c delta)/(2 sqrt(2)).
double bound_derivative(double w, const ControlGains& gains, double r_c, double delta);
double bound_limit(const ControlGains& gains, double r_c, double delta);

// Integrates one trial; on_step (optional) observes (t, state) after each step.
StabilityTrial run_stability_trial(const ErrorState& initial, double theta_d,
                                   const StabilityTrialParams& params,
                                   const std::function<void(double, const ErrorState&)>& on_step = {});

// Seeded batch of trials with random initial conditions.
StabilityReport verify_stability(const StabilityTrialParams& params, int trials,
                                 std::uint64_t seed);

}  // namespace swarmsim
