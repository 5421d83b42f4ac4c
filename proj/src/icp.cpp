#include "swarmsim/icp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "swarmsim/errors.hpp"

namespace swarmsim {

PointSet extract_landmarks(const SlamMap& map, std::uint8_t occupied_threshold,
                           double min_spacing) {
  PointSet out;
  const double spacing_sq = min_spacing * min_spacing;
  for (int iy = 0; iy < map.size_cells(); ++iy) {
    for (int ix = 0; ix < map.size_cells(); ++ix) {
      if (map.at(ix, iy) > occupied_threshold) {
        continue;
      }
      const Vec2 c = map.cell_center(ix, iy);
      bool crowded = false;
      for (const Vec2& p : out.points) {
        if ((p - c).squared_norm() < spacing_sq) {
          crowded = true;
          break;
        }
      }
      if (!crowded) {
        out.points.push_back(c);
      }
    }
  }
  return out;
}

std::vector<MatchPair> match_points(const PointSet& source, const PointSet& target,
                                    double tolerance) {
  std::vector<MatchPair> pairs;
  if (target.points.empty()) {
    throw NoCorrespondenceError("match_points: empty target set");
  }
  for (std::size_t i = 0; i < source.points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (std::size_t j = 0; j < target.points.size(); ++j) {
      const double d = (source.points[i] - target.points[j]).squared_norm();
      if (d < best) {
        best = d;
        best_j = static_cast<int>(j);
      }
    }
    const double dist = std::sqrt(best);
    if (dist <= tolerance) {
      pairs.push_back({static_cast<int>(i), best_j, dist});
    }
  }
  if (pairs.empty()) {
    throw NoCorrespondenceError("match_points: no pair within tolerance");
  }
  return pairs;
}

RigidTransform2D solve_transform(const std::vector<std::pair<Vec2, Vec2>>& pairs) {
  if (pairs.empty()) {
    throw NoCorrespondenceError("solve_transform: no pairs");
  }
  Vec2 p_bar, q_bar;
  for (const auto& [p, q] : pairs) {
    p_bar += p;
    q_bar += q;
  }
  const double n = static_cast<double>(pairs.size());
  p_bar = p_bar / n;
  q_bar = q_bar / n;

  // H = sum p' q'^T, 2x2
  double h11 = 0.0, h12 = 0.0, h21 = 0.0, h22 = 0.0;
  for (const auto& [p, q] : pairs) {
    const Vec2 pp = p - p_bar;
    const Vec2 qq = q - q_bar;
    h11 += pp.x * qq.x;
    h12 += pp.x * qq.y;
    h21 += pp.y * qq.x;
    h22 += pp.y * qq.y;
  }

  const double sin_part = h12 - h21;
  const double cos_part = h11 + h22;
  if (sin_part == 0.0 && cos_part == 0.0) {
    throw DegenerateConfigurationError("solve_transform: rotation undefined for this geometry");
  }
  RigidTransform2D out;
  out.theta = std::atan2(sin_part, cos_part);
  out.t = q_bar - rotate(p_bar, out.theta);
  return out;
}

IcpResult icp(const PointSet& source, const PointSet& target, const RigidTransform2D& initial,
              const IcpParams& params) {
  IcpResult result;
  result.transform = initial;

  PointSet moved;
  moved.points.resize(source.points.size());

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    for (std::size_t i = 0; i < source.points.size(); ++i) {
      moved.points[i] = result.transform.apply(source.points[i]);
    }

    std::vector<MatchPair> pairs;
    try {
      pairs = match_points(moved, target, params.match_tolerance);
    } catch (const NoCorrespondenceError& e) {
      throw NoCorrespondenceError(std::string(e.what()) + " (icp iteration " +
                                      std::to_string(iter) + ")",
                                  iter);
    }

    std::vector<std::pair<Vec2, Vec2>> matched;
    matched.reserve(pairs.size());
    double residual = 0.0;
    for (const MatchPair& m : pairs) {
      matched.emplace_back(moved.points[m.source_index], target.points[m.target_index]);
      residual += m.distance;
    }
    result.mean_residual = residual / static_cast<double>(pairs.size());

    const RigidTransform2D delta = solve_transform(matched);
    result.transform = compose(delta, result.transform);
    result.iterations = iter + 1;

    if (std::abs(delta.theta) < params.convergence_eps && delta.t.norm() < params.convergence_eps) {
      result.converged = true;
      break;
    }
  }

  // residual under the final alignment, for quality flagging
  for (std::size_t i = 0; i < source.points.size(); ++i) {
    moved.points[i] = result.transform.apply(source.points[i]);
  }
  try {
    const auto pairs = match_points(moved, target, params.match_tolerance);
    double residual = 0.0;
    for (const MatchPair& m : pairs) {
      residual += m.distance;
    }
    result.mean_residual = residual / static_cast<double>(pairs.size());
  } catch (const NoCorrespondenceError&) {
    result.mean_residual = std::numeric_limits<double>::infinity();
  }
  return result;
}

RigidTransform2D chain_transforms(const std::vector<RigidTransform2D>& chain) {
  RigidTransform2D out;  // identity
  for (const RigidTransform2D& link : chain) {
    out = compose(link, out);
  }
  return out;
}

}  // namespace swarmsim
