#pragma once

#include <iomanip>
#include <random>

#include "navigan/scene.hpp"

namespace navigan {

// Synthetic "toy crossing" crowd: one pedestrian stream walking +x along a
// corridor, one walking +y across it, meeting near the origin. Small seeded
// jitter on spawn lanes keeps encounters close but not exactly overlapping.
struct ToyConfig {
  int n_frames = 110;
  int spawn_period = 6;
  double speed = 0.3;       // meters per step (2.5 fps)
  double extent = 9.0;      // agents live while |coord| <= extent
  double lane_gap = 0.8;
  std::uint64_t seed = 7;
};

inline Scene make_toy_crossing(const ToyConfig& cfg = {}) {
  Scene scene;
  scene.frame_rate = 2.5;
  scene.name = "toy_crossing";
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);

  int next_id = 1;
  auto spawn = [&](std::int64_t frame0, Vec2 start, Vec2 vel) {
    const int id = next_id++;
    Vec2 p = start;
    for (std::int64_t f = frame0; f < cfg.n_frames; ++f) {
      if (std::abs(p.x()) > cfg.extent || std::abs(p.y()) > cfg.extent) break;
      scene.tracks[id].emplace_back(f, p);
      p += vel;
    }
  };

  const double lanes[3] = {-cfg.lane_gap, 0.0, cfg.lane_gap};
  int lane = 0;
  for (std::int64_t f = 0; f < cfg.n_frames; f += cfg.spawn_period) {
    const double ja = jitter(rng), jb = jitter(rng);
    spawn(f, Vec2(-cfg.extent, lanes[lane % 3] + ja), Vec2(cfg.speed, 0.0));
    spawn(f, Vec2(lanes[(lane + 1) % 3] + jb, -cfg.extent), Vec2(0.0, cfg.speed));
    ++lane;
  }
  return scene;
}

// Writes the 4-column text convention, rows ordered by (frame, agent id).
inline void write_scene(const std::filesystem::path& path, const Scene& scene) {
  std::vector<std::tuple<std::int64_t, int, Vec2>> rows;
  for (const auto& [id, track] : scene.tracks)
    for (const auto& [f, p] : track) rows.emplace_back(f, id, p);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open scene file for writing: " + path.string());
  out << std::setprecision(17);
  for (const auto& [f, id, p] : rows) out << f << " " << id << " " << p.x() << " " << p.y() << "\n";
}

}  // namespace navigan
