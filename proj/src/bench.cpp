#include "swarmsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "swarmsim/errors.hpp"
#include "swarmsim/rng.hpp"

namespace swarmsim {

namespace {

// Spread-out clouds keep nearest-neighbor matching well conditioned; plain
// uniform draws occasionally produce near-coincident points that stall icp
// in a wrong local minimum.
std::vector<Vec2> sample_cloud(Rng& rng, int count, double extent, double spacing) {
  std::vector<Vec2> points;
  points.reserve(count);
  const double half = extent / 2.0;
  const double spacing_sq = spacing * spacing;
  int attempts = 0;
  while (static_cast<int>(points.size()) < count) {
    Vec2 p{rng.uniform(-half, half), rng.uniform(-half, half)};
    bool ok = true;
    for (const Vec2& q : points) {
      if ((p - q).squared_norm() < spacing_sq) {
        ok = false;
        break;
      }
    }
    if (ok || ++attempts > 1000) {
      points.push_back(p);
      attempts = 0;
    }
  }
  return points;
}

// Centroid plus principal-axis pre-alignment. Nearest-neighbor iteration
// alone has a narrow rotational basin on sparse clouds, so each trial seeds
// icp with this standard coarse guess; the axis is defined mod pi and the
// representative nearest zero is used, valid while |true rotation| < pi/2.
RigidTransform2D coarse_alignment(const std::vector<Vec2>& source,
                                  const std::vector<Vec2>& target) {
  const auto principal = [](const std::vector<Vec2>& pts, Vec2& mean) {
    mean = Vec2{};
    for (const Vec2& p : pts) mean += p;
    if (!pts.empty()) mean = mean / static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const Vec2& p : pts) {
      const Vec2 d = p - mean;
      sxx += d.x * d.x;
      sxy += d.x * d.y;
      syy += d.y * d.y;
    }
    return 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  };
  Vec2 source_mean, target_mean;
  const double angle_s = principal(source, source_mean);
  const double angle_t = principal(target, target_mean);
  double theta = wrap_angle(angle_t - angle_s);
  if (theta > kPi / 2.0) theta -= kPi;
  if (theta <= -kPi / 2.0) theta += kPi;
  RigidTransform2D guess;
  guess.theta = theta;
  guess.t = target_mean - rotate(source_mean, theta);
  return guess;
}

}  // namespace

double IcpBenchReport::success_rate() const {
  const int counted = static_cast<int>(trials.size()) - num_skipped;
  if (counted <= 0) return 0.0;
  return static_cast<double>(num_success) / counted;
}

IcpBenchReport run_icp_bench(const IcpBenchParams& params, std::uint64_t seed) {
  if (params.trials <= 0) throw ConfigError("icp bench: trials must be positive");
  if (params.min_landmarks < 1 || params.max_landmarks < params.min_landmarks) {
    throw ConfigError("icp bench: landmark count range is empty");
  }

  Rng rng(seed);
  IcpBenchReport report;
  report.trials.reserve(params.trials);

  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < params.trials; ++trial) {
    const int count = rng.uniform_int(params.min_landmarks, params.max_landmarks);
    PointSet source;
    source.points = sample_cloud(rng, count, params.cloud_extent, params.min_point_spacing);

    RigidTransform2D truth;
    truth.theta = rng.uniform(-params.max_rotation, params.max_rotation);
    const double bearing = rng.uniform(0.0, 2.0 * kPi);
    const double dist = params.max_translation * std::sqrt(rng.uniform(0.0, 1.0));
    truth.t = Vec2{dist * std::cos(bearing), dist * std::sin(bearing)};

    PointSet target;
    target.points.reserve(source.points.size());
    for (const Vec2& p : source.points) {
      Vec2 q = truth.apply(p);
      if (params.noise_sigma > 0.0) {
        q.x += rng.normal(0.0, params.noise_sigma);
        q.y += rng.normal(0.0, params.noise_sigma);
      }
      target.points.push_back(q);
    }

    IcpBenchTrial record;
    try {
      const IcpResult result =
          icp(source, target, coarse_alignment(source.points, target.points), params.icp);
      record.iterations = result.iterations;
      record.converged = result.converged;
      record.rot_error = std::abs(wrap_angle(result.transform.theta - truth.theta));
      record.trans_error = (result.transform.t - truth.t).norm();
      record.success = result.converged && record.rot_error <= params.rotation_tol &&
                       record.trans_error <= params.translation_tol &&
                       result.iterations <= params.icp.max_iterations;
    } catch (const DegenerateConfigurationError&) {
      record.skipped_degenerate = true;
      report.num_skipped += 1;
    } catch (const NoCorrespondenceError&) {
      record.skipped_degenerate = true;
      report.num_skipped += 1;
    }

    if (record.success) report.num_success += 1;
    if (!record.skipped_degenerate) {
      report.max_rot_error = std::max(report.max_rot_error, record.rot_error);
      report.max_trans_error = std::max(report.max_trans_error, record.trans_error);
    }
    report.trials.push_back(record);
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace swarmsim
