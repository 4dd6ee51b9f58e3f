#pragma once

#include <deque>
#include <functional>
#include <limits>

#include "navigan/bundle.hpp"
#include "navigan/scene.hpp"

namespace navigan {

// One long-term navigation episode: replayed crowd, replanning target agent.
struct EpisodeSpec {
  int target_id = -1;
  std::size_t start_index = 0;      // index into the scene frame axis
  std::int64_t start_frame = 0;     // frame id at start_index
  Vec2 goal = Vec2::Zero();         // recorded position goal_mult * t_pred ahead
  int cutoff = 60;                  // cutoff_mult * t_pred steps
  double arrival_tolerance = 0.5;
  double comfort_distance = 0.2;
};

struct EpisodeResult {
  std::vector<Vec2> executed;           // rolled-out world positions, one per step
  std::vector<double> min_separations;  // per-step min distance to any replayed pedestrian
  bool success = false;
  int steps_used = 0;
  double comfort_distance = 0.2;
};

// Precomputed frame-axis view of a scene for episode evaluation.
struct PlaybackContext {
  const Scene* scene = nullptr;
  FrameConfig cfg;
  std::vector<std::int64_t> axis;
  detail::FrameIndexed by_frame;

  PlaybackContext(const Scene& s, const FrameConfig& c) : scene(&s), cfg(c), axis(s.frame_axis()) {
    by_frame = detail::index_by_frame(s, axis);
  }
};

// One spec per (agent, start) where the agent is present consecutively from
// t_obs history through the goal horizon.
inline std::vector<EpisodeSpec> build_episode_set(const PlaybackContext& ctx, int goal_mult = 3,
                                                  int cutoff_mult = 5,
                                                  double arrival_tolerance = 0.5,
                                                  double comfort_distance = 0.2) {
  const int t_obs = ctx.cfg.t_obs;
  const int horizon = goal_mult * ctx.cfg.t_pred;
  const std::size_t span = static_cast<std::size_t>(t_obs + horizon);
  std::vector<EpisodeSpec> specs;
  for (const auto& [id, track] : ctx.by_frame) {
    if (ctx.axis.size() < span) break;
    for (std::size_t begin = 0; begin + span <= ctx.axis.size(); ++begin) {
      if (!detail::present_range(track, begin, span)) continue;
      EpisodeSpec spec;
      spec.target_id = id;
      spec.start_index = begin + static_cast<std::size_t>(t_obs) - 1;
      spec.start_frame = ctx.axis[spec.start_index];
      spec.goal = track.at(spec.start_index + static_cast<std::size_t>(horizon));
      spec.cutoff = cutoff_mult * ctx.cfg.t_pred;
      spec.arrival_tolerance = arrival_tolerance;
      spec.comfort_distance = comfort_distance;
      specs.push_back(spec);
    }
  }
  return specs;
}

// A navigation policy: given the current observation window (target-centric)
// and the upcoming frame-axis index, return the next world position.
using Policy = std::function<Vec2(const TrainingSample&, std::size_t next_axis_index)>;

namespace detail {

// Observation window for a replanning step: the target's last t_obs positions
// (recorded history then executed), other agents at the matching frames.
inline TrainingSample make_window(const PlaybackContext& ctx, int target_id,
                                  const std::deque<Vec2>& history, std::size_t last_index) {
  TrainingSample s;
  s.target_id = target_id;
  s.origin = history.front();
  MaskedSeq target_obs;
  for (const auto& p : history) target_obs.push_back(p - s.origin);
  s.observed[target_id] = std::move(target_obs);
  // a single placeholder future step; only its length is consumed downstream
  s.future_truth.assign(1, Vec2::Zero());

  const std::size_t t_obs = history.size();
  const std::size_t first_index = last_index + 1 - t_obs;
  for (const auto& [id, track] : ctx.by_frame) {
    if (id == target_id) continue;
    MaskedSeq obs(t_obs);
    bool any = false;
    for (std::size_t t = 0; t < t_obs; ++t) {
      auto it = track.find(first_index + t);
      if (it != track.end()) {
        obs[t] = it->second - s.origin;
        any = true;
      }
    }
    if (any) s.observed[id] = std::move(obs);
  }
  return s;
}

inline double min_separation(const PlaybackContext& ctx, int target_id, std::size_t axis_index,
                             const Vec2& position) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [id, track] : ctx.by_frame) {
    if (id == target_id) continue;
    auto it = track.find(axis_index);
    if (it != track.end()) best = std::min(best, (position - it->second).norm());
  }
  return best;
}

}  // namespace detail

inline EpisodeResult rollout_episode(const PlaybackContext& ctx, const EpisodeSpec& spec,
                                     const Policy& policy) {
  const std::size_t t_obs = static_cast<std::size_t>(ctx.cfg.t_obs);
  const auto& track = ctx.by_frame.at(spec.target_id);
  if (spec.start_index + 1 < t_obs ||
      !detail::present_range(track, spec.start_index + 1 - t_obs, t_obs))
    throw InsufficientHistory("rollout_episode: target lacks t_obs history at start frame");

  std::deque<Vec2> history;
  for (std::size_t t = spec.start_index + 1 - t_obs; t <= spec.start_index; ++t)
    history.push_back(track.at(t));

  EpisodeResult result;
  result.comfort_distance = spec.comfort_distance;
  Vec2 current = history.back();
  for (int step = 0;; ++step) {
    if ((current - spec.goal).norm() <= spec.arrival_tolerance) {
      result.success = true;
      result.steps_used = step;
      break;
    }
    if (step == spec.cutoff) {
      result.success = false;
      result.steps_used = spec.cutoff;
      break;
    }
    const std::size_t last_index = spec.start_index + static_cast<std::size_t>(step);
    TrainingSample window = detail::make_window(ctx, spec.target_id, history, last_index);
    current = policy(window, last_index + 1);
    result.executed.push_back(current);
    result.min_separations.push_back(
        detail::min_separation(ctx, spec.target_id, last_index + 1, current));
    history.pop_front();
    history.push_back(current);
  }
  return result;
}

// ---- stock policies -----------------------------------------------------------

// Replans with a trained model each step; executes the first waypoint only.
// One fluctuation draw per replanning step.
inline Policy model_policy(ModelBundle& bundle, const Vec2& goal_world, std::uint64_t noise_seed) {
  auto rng = std::make_shared<std::mt19937_64>(noise_seed);
  return [&bundle, goal_world, rng](const TrainingSample& window, std::size_t) {
    TrainingSample sample = window;
    sample.goal = goal_world - sample.origin;
    ad::Tape t;
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXd noise = Eigen::VectorXd::Zero(bundle.dims.noise_dim);
    if (uses_noise(bundle.variant))
      for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = dist(*rng);
    Vec2 next;
    if (bundle.variant == Variant::GOAL_SOCIAL) {
      auto path = goal_social_forward(t, bundle.goal_social, sample);
      next = values_of(path).front();
    } else {
      auto out = generate(t, bundle.gen, sample, noise);
      next = values_of(out.waypoints).front();
    }
    return Vec2(next + sample.origin);
  };
}

// Replays the recorded trajectory (the metric-stack oracle, "human" row).
inline Policy human_policy(const PlaybackContext& ctx, int target_id) {
  return [&ctx, target_id](const TrainingSample& window, std::size_t next_axis_index) {
    const auto& track = ctx.by_frame.at(target_id);
    auto it = track.find(next_axis_index);
    if (it != track.end()) return it->second;
    return Vec2(*window.observed.at(target_id).back() + window.origin);  // recording ended: stay
  };
}

// Never moves; exercises the cutoff path.
inline Policy stationary_policy() {
  return [](const TrainingSample& window, std::size_t) {
    return Vec2(*window.observed.at(window.target_id).back() + window.origin);
  };
}

}  // namespace navigan
