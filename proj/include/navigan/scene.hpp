#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "navigan/types.hpp"

namespace navigan {

// A recorded crowd: per-agent (frame, position) tracks at fixed frame rate.
struct Scene {
  double frame_rate = 2.5;
  std::string name;
  // frame indices strictly increasing per agent
  std::map<int, std::vector<std::pair<std::int64_t, Vec2>>> tracks;

  // Sorted union of all frame indices in the scene.
  std::vector<std::int64_t> frame_axis() const {
    std::set<std::int64_t> frames;
    for (const auto& [id, track] : tracks)
      for (const auto& [f, p] : track) frames.insert(f);
    return {frames.begin(), frames.end()};
  }
};

// Parses the 4-column whitespace text convention: frame, agent-id, x, y.
inline Scene parse_trajectory_file(const std::filesystem::path& path, double frame_rate = 2.5) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path.string());

  Scene scene;
  scene.frame_rate = frame_rate;
  scene.name = path.stem().string();

  std::set<std::pair<std::int64_t, int>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ss(line);
    double frame_raw, id_raw, x, y;
    if (!(ss >> frame_raw >> id_raw >> x >> y)) {
      throw MalformedLine(path.string() + ":" + std::to_string(lineno) + ": expected 4 numeric fields");
    }
    std::string extra;
    if (ss >> extra) {
      throw MalformedLine(path.string() + ":" + std::to_string(lineno) + ": trailing fields");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw MalformedLine(path.string() + ":" + std::to_string(lineno) + ": non-finite coordinate");
    }
    const auto frame = static_cast<std::int64_t>(std::llround(frame_raw));
    const auto id = static_cast<int>(std::llround(id_raw));
    if (!seen.insert({frame, id}).second) {
      throw DuplicateObservation(path.string() + ":" + std::to_string(lineno) + ": duplicate (frame, agent) row");
    }
    scene.tracks[id].emplace_back(frame, Vec2(x, y));
  }
  if (scene.tracks.empty()) throw EmptyScene(path.string() + ": no trajectory rows");

  for (auto& [id, track] : scene.tracks)
    std::sort(track.begin(), track.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  return scene;
}

namespace detail {

// agent-id -> (frame axis index -> position)
using FrameIndexed = std::map<int, std::unordered_map<std::size_t, Vec2>>;

inline FrameIndexed index_by_frame(const Scene& scene, const std::vector<std::int64_t>& axis) {
  std::unordered_map<std::int64_t, std::size_t> pos_of;
  pos_of.reserve(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) pos_of[axis[i]] = i;
  FrameIndexed out;
  for (const auto& [id, track] : scene.tracks)
    for (const auto& [f, p] : track) out[id][pos_of.at(f)] = p;
  return out;
}

inline bool present_range(const std::unordered_map<std::size_t, Vec2>& track, std::size_t begin,
                          std::size_t count) {
  for (std::size_t i = 0; i < count; ++i)
    if (!track.count(begin + i)) return false;
  return true;
}

}  // namespace detail

// Windows a scene into training samples. A sample is emitted for every
// (target agent, window start) where the target is present at all
// t_obs + t_pred consecutive frames of the scene's frame axis. Other agents
// contribute whatever subset of the window they occupy, masked per step.
inline std::vector<TrainingSample> extract_windows(const Scene& scene, const FrameConfig& cfg,
                                                   int stride = 1) {
  if (stride < 1) throw std::invalid_argument("extract_windows: stride must be >= 1");
  const auto axis = scene.frame_axis();
  const auto by_frame = detail::index_by_frame(scene, axis);
  const std::size_t t_end = static_cast<std::size_t>(cfg.t_end());

  std::vector<TrainingSample> samples;
  if (axis.size() < t_end) return samples;

  for (std::size_t start = 0; start + t_end <= axis.size(); start += static_cast<std::size_t>(stride)) {
    for (const auto& [target, track] : by_frame) {
      if (!detail::present_range(track, start, t_end)) continue;

      TrainingSample s;
      s.target_id = target;
      s.origin = track.at(start);

      MaskedSeq target_obs(cfg.t_obs);
      for (int t = 0; t < cfg.t_obs; ++t) target_obs[t] = track.at(start + t) - s.origin;
      s.observed[target] = std::move(target_obs);

      s.future_truth.reserve(cfg.t_pred);
      for (int t = 0; t < cfg.t_pred; ++t)
        s.future_truth.push_back(track.at(start + cfg.t_obs + t) - s.origin);
      s.goal = s.future_truth.back();

      for (const auto& [other, otrack] : by_frame) {
        if (other == target) continue;
        MaskedSeq obs(cfg.t_obs);
        MaskedSeq fut(cfg.t_pred);
        bool any = false;
        for (int t = 0; t < cfg.t_obs; ++t) {
          auto it = otrack.find(start + t);
          if (it != otrack.end()) {
            obs[t] = it->second - s.origin;
            any = true;
          }
        }
        for (int t = 0; t < cfg.t_pred; ++t) {
          auto it = otrack.find(start + cfg.t_obs + t);
          if (it != otrack.end()) fut[t] = it->second - s.origin;
        }
        if (any || std::any_of(fut.begin(), fut.end(), [](const auto& p) { return p.has_value(); })) {
          s.observed[other] = std::move(obs);
          s.others_future[other] = std::move(fut);
        }
      }
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

}  // namespace navigan
