#pragma once

#include "navigan/playback.hpp"

namespace navigan {

struct MetricsReport {
  double social_score = 0.0;
  double comfort_rate = 0.0;
  double arrival_rate = 0.0;
  double ade = 0.0;
  double fde = 0.0;
  int n_episodes = 0;
};

// Per-step reward; branch order matters: overlap, then discomfort band, then
// goal arrival, then neutral.
inline double step_reward(double d_t, bool reached_goal) {
  if (d_t <= 0.0) return -0.25;
  if (d_t < 0.2) return -0.1 + d_t / 2.0;
  if (reached_goal) return 1.0;
  return 0.0;
}

// Undiscounted per-episode reward sum; the arrival reward is granted once at
// the terminating step (at step 0 for immediate arrival).
inline double episode_reward(const EpisodeResult& e) {
  double total = 0.0;
  for (int i = 0; i < e.steps_used; ++i) {
    const bool terminal = e.success && i + 1 == e.steps_used;
    total += step_reward(e.min_separations[static_cast<std::size_t>(i)], terminal);
  }
  if (e.success && e.steps_used == 0)
    total += step_reward(std::numeric_limits<double>::infinity(), true);
  return total;
}

inline double social_score(const std::vector<EpisodeResult>& episodes) {
  if (episodes.empty()) throw EmptySet("social_score: no episodes");
  double sum = 0.0;
  for (const auto& e : episodes) sum += episode_reward(e);
  return sum / static_cast<double>(episodes.size());
}

inline bool comfort_violated(const EpisodeResult& e) {
  for (double d : e.min_separations)
    if (d < e.comfort_distance) return true;
  return false;
}

// Fraction of episodes free of comfort-distance violations.
inline double comfort_rate(const std::vector<EpisodeResult>& episodes) {
  if (episodes.empty()) throw EmptySet("comfort_rate: no episodes");
  std::size_t clean = 0;
  for (const auto& e : episodes)
    if (!comfort_violated(e)) ++clean;
  return static_cast<double>(clean) / static_cast<double>(episodes.size());
}

inline double arrival_rate(const std::vector<EpisodeResult>& episodes) {
  if (episodes.empty()) throw EmptySet("arrival_rate: no episodes");
  std::size_t ok = 0;
  for (const auto& e : episodes)
    if (e.success) ++ok;
  return static_cast<double>(ok) / static_cast<double>(episodes.size());
}

inline std::pair<double, double> ade_fde(const std::vector<Vec2>& truth,
                                         const std::vector<Vec2>& pred) {
  if (truth.size() != pred.size()) throw LengthMismatch("ade_fde: sequence length mismatch");
  if (truth.empty()) throw EmptySet("ade_fde: empty sequences");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += (truth[i] - pred[i]).norm();
  return {sum / static_cast<double>(truth.size()), (truth.back() - pred.back()).norm()};
}

inline MetricsReport make_report(const std::vector<EpisodeResult>& episodes, double ade = 0.0,
                                 double fde = 0.0) {
  MetricsReport r;
  r.social_score = social_score(episodes);
  r.comfort_rate = comfort_rate(episodes);
  r.arrival_rate = arrival_rate(episodes);
  r.ade = ade;
  r.fde = fde;
  r.n_episodes = static_cast<int>(episodes.size());
  return r;
}

}  // namespace navigan
