#include "swarmsim/stability.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "swarmsim/rng.hpp"

namespace swarmsim {

namespace {

ErrorDerivative eval(const ErrorState& e, double theta_d, const ControlGains& gains, double r_c) {
  return error_dynamics(e, theta_d, gains, r_c);
}

ErrorState axpy(const ErrorState& e, const ErrorDerivative& d, double h) {
  return {{e.e_c.x + h * d.e_c_dot.x, e.e_c.y + h * d.e_c_dot.y}, e.e_theta + h * d.e_theta_dot};
}

}  // namespace

ErrorState rk4_error_step(const ErrorState& e, double theta_d, const ControlGains& gains,
                          double r_c, double dt) {
  const ErrorDerivative k1 = eval(e, theta_d, gains, r_c);
  const ErrorDerivative k2 = eval(axpy(e, k1, 0.5 * dt), theta_d, gains, r_c);
  const ErrorDerivative k3 = eval(axpy(e, k2, 0.5 * dt), theta_d, gains, r_c);
  const ErrorDerivative k4 = eval(axpy(e, k3, dt), theta_d, gains, r_c);

  ErrorState out;
  out.e_c.x = e.e_c.x + dt / 6.0 * (k1.e_c_dot.x + 2.0 * k2.e_c_dot.x + 2.0 * k3.e_c_dot.x + k4.e_c_dot.x);
  out.e_c.y = e.e_c.y + dt / 6.0 * (k1.e_c_dot.y + 2.0 * k2.e_c_dot.y + 2.0 * k3.e_c_dot.y + k4.e_c_dot.y);
  out.e_theta =
      e.e_theta + dt / 6.0 * (k1.e_theta_dot + 2.0 * k2.e_theta_dot + 2.0 * k3.e_theta_dot + k4.e_theta_dot);
  return out;
}

double bound_derivative(double w, const ControlGains& gains, double r_c, double delta) {
  return -0.5 * gains.k_c * std::tanh(gains.k_t * w) +
         gains.k_theta * r_c * delta / (2.0 * std::sqrt(2.0));
}

double bound_limit(const ControlGains& gains, double r_c, double delta) {
  const double arg = gains.k_theta * r_c * delta / (std::sqrt(2.0) * gains.k_c);
  if (arg >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  return std::atanh(arg) / gains.k_t;
}

namespace {

double rk4_bound_step(double w, const ControlGains& gains, double r_c, double delta, double dt) {
  const double k1 = bound_derivative(w, gains, r_c, delta);
  const double k2 = bound_derivative(w + 0.5 * dt * k1, gains, r_c, delta);
  const double k3 = bound_derivative(w + 0.5 * dt * k2, gains, r_c, delta);
  const double k4 = bound_derivative(w + dt * k3, gains, r_c, delta);
  return w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

StabilityTrial run_stability_trial(const ErrorState& initial, double theta_d,
                                   const StabilityTrialParams& params,
                                   const std::function<void(double, const ErrorState&)>& on_step) {
  StabilityTrial trial;
  trial.initial = initial;
  trial.theta_d = theta_d;

  const long steps = std::lround(params.duration / params.dt);
  const double sqrt2 = std::sqrt(2.0);

  ErrorState e = initial;
  double w = 0.0;
  long step = 0;

  auto observe = [&](double t) {
    const double v = e.e_c.norm() / sqrt2;
    if (!trial.bound_started) {
      if (std::abs(e.e_theta) <= params.delta) {
        trial.bound_started = true;
        w = v;
      }
    } else {
      trial.max_bound_excess = std::max(trial.max_bound_excess, v - w);
    }
    if (!trial.converged && e.e_c.norm() < params.tol_position &&
        std::abs(e.e_theta) < params.tol_heading) {
      trial.converged = true;
      trial.time_to_converge = t;
    }
  };

  observe(0.0);
  while (step < steps && !trial.converged) {
    e = rk4_error_step(e, theta_d, params.gains, params.r_c, params.dt);
    if (trial.bound_started) {
      w = rk4_bound_step(w, params.gains, params.r_c, params.delta, params.dt);
    }
    ++step;
    const double t = static_cast<double>(step) * params.dt;
    if (on_step) {
      on_step(t, e);
    }
    observe(t);
  }

  trial.final_ec_norm = e.e_c.norm();
  trial.final_etheta = e.e_theta;

  // carry the bound to the full horizon so its limit can be checked
  if (trial.bound_started) {
    for (; step < steps; ++step) {
      w = rk4_bound_step(w, params.gains, params.r_c, params.delta, params.dt);
    }
    trial.w_final = w;
  }
  return trial;
}

StabilityReport verify_stability(const StabilityTrialParams& params, int trials,
                                 std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  StabilityReport report;
  report.w_limit_formula = bound_limit(params.gains, params.r_c, params.delta);
  Rng rng(seed);

  for (int i = 0; i < trials; ++i) {
    ErrorState init;
    const double radius = params.init_radius * std::sqrt(rng.uniform());
    const double dir = rng.uniform(-kPi, kPi);
    init.e_c = radius * heading_vector(dir);
    // (-pi, pi) with the slow neighborhood of pi removed
    init.e_theta = -kPi + (2.0 * kPi - params.heading_exclusion) * (1.0 - rng.uniform());
    const double theta_d = wrap_angle(rng.uniform(-kPi, kPi));

    StabilityTrial trial = run_stability_trial(init, theta_d, params);
    if (trial.converged) {
      ++report.num_converged;
    }
    report.max_final_ec = std::max(report.max_final_ec, trial.final_ec_norm);
    report.max_final_etheta = std::max(report.max_final_etheta, std::abs(trial.final_etheta));
    if (trial.bound_started) {
      report.max_bound_excess = std::max(report.max_bound_excess, trial.max_bound_excess);
      report.max_w_limit_gap =
          std::max(report.max_w_limit_gap, std::abs(trial.w_final - report.w_limit_formula));
    }
    report.trials.push_back(trial);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace swarmsim
