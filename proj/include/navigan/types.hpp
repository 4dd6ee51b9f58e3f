#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace navigan {

using Vec2 = Eigen::Vector2d;

// ---- error types -----------------------------------------------------------

struct MalformedLine : std::runtime_error {
  explicit MalformedLine(const std::string& what) : std::runtime_error(what) {}
};
struct DuplicateObservation : std::runtime_error {
  explicit DuplicateObservation(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyScene : std::runtime_error {
  explicit EmptyScene(const std::string& what) : std::runtime_error(what) {}
};
struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct LengthMismatch : std::runtime_error {
  explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct EmptySet : std::runtime_error {
  explicit EmptySet(const std::string& what) : std::runtime_error(what) {}
};
struct EmptySequence : std::runtime_error {
  explicit EmptySequence(const std::string& what) : std::runtime_error(what) {}
};
struct DivergenceDetected : std::runtime_error {
  explicit DivergenceDetected(const std::string& what) : std::runtime_error(what) {}
};
struct InsufficientHistory : std::runtime_error {
  explicit InsufficientHistory(const std::string& what) : std::runtime_error(what) {}
};
struct BundleError : std::runtime_error {
  explicit BundleError(const std::string& what) : std::runtime_error(what) {}
};

// ---- windowing configuration ------------------------------------------------

struct FrameConfig {
  int t_obs = 8;
  int t_pred = 12;

  FrameConfig() = default;
  FrameConfig(int obs, int pred) : t_obs(obs), t_pred(pred) {
    if (t_obs < 2) throw std::invalid_argument("FrameConfig: t_obs must be >= 2");
    if (t_pred < 1) throw std::invalid_argument("FrameConfig: t_pred must be >= 1");
  }
  int t_end() const { return t_obs + t_pred; }
};

// Position track with per-step presence mask.
using MaskedSeq = std::vector<std::optional<Vec2>>;

// One windowed training instance, all coordinates target-centric.
struct TrainingSample {
  int target_id = -1;
  // Length t_obs each; observed[target_id] is fully present and starts at (0,0).
  std::map<int, MaskedSeq> observed;
  std::vector<Vec2> future_truth;          // length t_pred
  // Replayed other-agent positions over the prediction window, length t_pred.
  std::map<int, MaskedSeq> others_future;
  Vec2 goal = Vec2::Zero();
  Vec2 origin = Vec2::Zero();              // world position of the frame origin
};

inline std::vector<Vec2> to_target_frame(const std::vector<Vec2>& points, const Vec2& origin) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p - origin);
  return out;
}

inline std::vector<Vec2> from_target_frame(const std::vector<Vec2>& points, const Vec2& origin) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p + origin);
  return out;
}

}  // namespace navigan
