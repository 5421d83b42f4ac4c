#include "swarmsim/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "swarmsim/errors.hpp"
#include "swarmsim/swarm.hpp"

namespace swarmsim {

std::string pgm_bytes(const ByteGrid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width_cells()) + " " +
                    std::to_string(grid.height_cells()) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(grid.width_cells()) * grid.height_cells());
  for (int iy = grid.height_cells() - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < grid.width_cells(); ++ix) {
      out.push_back(static_cast<char>(grid.at(ix, iy)));
    }
  }
  return out;
}

void write_pgm(const std::string& path, const ByteGrid& grid) {
  write_text_file(path, pgm_bytes(grid));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw SimError("cannot open for writing: " + path);
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw SimError("write failed: " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void MissionLog::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);

  write_text_file((base / "config.snapshot").string(), config_snapshot);

  for (int id = 1; id <= agent_count; ++id) {
    std::string csv = "time_s,x,y,theta,est_x,est_y,est_theta\n";
    for (const TrajectorySample& s : trajectories[id - 1]) {
      csv += fmt(s.t) + "," + fmt(s.truth.position.x) + "," + fmt(s.truth.position.y) + "," +
             fmt(s.truth.theta) + "," + fmt(s.estimate.position.x) + "," +
             fmt(s.estimate.position.y) + "," + fmt(s.estimate.theta) + "\n";
    }
    write_text_file((base / ("trajectory_" + std::to_string(id) + ".csv")).string(), csv);
  }

  std::string cov = "time_s,agent_id,coverage_pct\n";
  for (const CoverageSample& s : coverage) {
    cov += fmt(s.t) + "," + std::to_string(s.agent_id) + "," + fmt(s.pct) + "\n";
  }
  write_text_file((base / "coverage.csv").string(), cov);

  std::string sync = "time_s,source_id,target_id,theta,t_x,t_y,iterations,mean_residual\n";
  for (const SyncRecord& r : sync_records) {
    sync += fmt(r.t) + "," + std::to_string(r.source_id) + "," + std::to_string(r.target_id) +
            "," + fmt(r.theta) + "," + fmt(r.translation.x) + "," + fmt(r.translation.y) + "," +
            std::to_string(r.iterations) + "," + fmt(r.mean_residual) + "\n";
  }
  write_text_file((base / "sync.csv").string(), sync);

  for (const PointSet& set : final_landmarks) {
    std::string csv;
    for (const Vec2& p : set.points) {
      csv += fmt(p.x) + "," + fmt(p.y) + "\n";
    }
    write_text_file((base / ("landmarks_" + std::to_string(set.owner) + ".csv")).string(), csv);
  }

  for (const MapSnapshot& snap : snapshots) {
    const std::string suffix = std::to_string(snap.agent_id) + "_" + std::to_string(snap.step);
    write_pgm((base / ("slam_" + suffix + ".pgm")).string(), snap.slam.grid());
    write_pgm((base / ("cov_" + suffix + ".pgm")).string(), snap.coverage.grid());
  }
}

}  // namespace swarmsim
