#pragma once

#include "navigan/metrics.hpp"
#include "navigan/training.hpp"

namespace navigan {

struct EvalOptions {
  int goal_mult = 3;
  int cutoff_mult = 5;
  double arrival_tolerance = 0.5;
  double comfort_distance = 0.2;
  std::uint64_t seed = 0;
  int episode_stride = 1;   // evaluate every n-th episode spec
  int max_episodes = 0;     // 0 = no cap
  bool human_playback = false;
  bool intention_only = false;  // dagger ablation: drop the social branch
};

// Variant of model_policy that executes the intention branch alone.
inline Policy intention_only_policy(ModelBundle& bundle, const Vec2& goal_world,
                                    std::uint64_t noise_seed) {
  auto rng = std::make_shared<std::mt19937_64>(noise_seed);
  return [&bundle, goal_world, rng](const TrainingSample& window, std::size_t) {
    TrainingSample sample = window;
    sample.goal = goal_world - sample.origin;
    ad::Tape t;
    const auto& target_obs = sample.observed.at(sample.target_id);
    std::vector<Vec2> target_seq;
    for (const auto& pt : target_obs) target_seq.push_back(*pt);
    CellState enc = encode_sequence(t, bundle.gen.enc_target, target_seq);
    auto path = intention_rollout(t, bundle.gen, enc, sample.goal, target_seq.back(), 1);
    return Vec2(values_of(path).front() + sample.origin);
  };
}

inline std::vector<EpisodeSpec> select_episodes(std::vector<EpisodeSpec> specs,
                                                const EvalOptions& opt) {
  std::vector<EpisodeSpec> out;
  for (std::size_t i = 0; i < specs.size(); i += static_cast<std::size_t>(std::max(1, opt.episode_stride))) {
    out.push_back(specs[i]);
    if (opt.max_episodes > 0 && out.size() >= static_cast<std::size_t>(opt.max_episodes)) break;
  }
  return out;
}

inline std::vector<EpisodeResult> run_episodes(ModelBundle* bundle, const PlaybackContext& ctx,
                                               const std::vector<EpisodeSpec>& specs,
                                               const EvalOptions& opt) {
  std::vector<EpisodeResult> results;
  results.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    Policy policy;
    if (opt.human_playback) {
      policy = human_policy(ctx, spec.target_id);
    } else if (opt.intention_only) {
      policy = intention_only_policy(*bundle, spec.goal, opt.seed + i);
    } else {
      policy = model_policy(*bundle, spec.goal, opt.seed + i);
    }
    results.push_back(rollout_episode(ctx, spec, policy));
  }
  return results;
}

// One-shot ADE/FDE of the model's windowed prediction against recorded truth.
inline std::pair<double, double> window_ade_fde(ModelBundle& bundle,
                                                const std::vector<TrainingSample>& samples,
                                                std::uint64_t seed) {
  if (samples.empty()) return {0.0, 0.0};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  double ade_sum = 0.0, fde_sum = 0.0;
  for (const auto& s : samples) {
    ad::Tape t;
    Eigen::VectorXd noise = Eigen::VectorXd::Zero(bundle.dims.noise_dim);
    if (uses_noise(bundle.variant))
      for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = dist(rng);
    std::vector<Vec2> pred;
    if (bundle.variant == Variant::GOAL_SOCIAL)
      pred = values_of(goal_social_forward(t, bundle.goal_social, s));
    else
      pred = values_of(generate(t, bundle.gen, s, noise).waypoints);
    auto [ade, fde] = ade_fde(s.future_truth, pred);
    ade_sum += ade;
    fde_sum += fde;
  }
  const double n = static_cast<double>(samples.size());
  return {ade_sum / n, fde_sum / n};
}

// ---- text artifacts --------------------------------------------------------------

inline std::string format_report(const MetricsReport& r) {
  std::ostringstream out;
  out << "n_episodes " << r.n_episodes << "\n"
      << "social_score " << r.social_score << "\n"
      << "comfort_rate " << r.comfort_rate << "\n"
      << "arrival_rate " << r.arrival_rate << "\n"
      << "ade " << r.ade << "\n"
      << "fde " << r.fde << "\n";
  return out.str();
}

inline void append_results_ledger(const std::filesystem::path& path, const std::string& variant,
                                  const std::string& dataset, std::uint64_t seed,
                                  const MetricsReport& r) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open results ledger: " + path.string());
  out << "variant=" << variant << " dataset=" << dataset << " seed=" << seed
      << " n=" << r.n_episodes << " S=" << r.social_score << " C=" << r.comfort_rate
      << " A=" << r.arrival_rate << " ade=" << r.ade << " fde=" << r.fde << "\n";
}

// Training log: one line per epoch; the resist column appears only for the
// resistance-trained variant.
inline void write_train_log(const std::filesystem::path& path, Variant variant,
                            const std::vector<EpochRecord>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open training log: " + path.string());
  const bool adv = uses_adversary(variant);
  const bool resist = variant == Variant::NAVIGAN_R;
  const bool fde = variant != Variant::GOAL_SOCIAL;
  out << "epoch,l2";
  if (fde) out << ",fde";
  if (adv) out << ",d_loss,g_loss";
  if (resist) out << ",resist";
  out << "\n";
  for (const auto& r : log) {
    out << r.epoch << "," << r.l2;
    if (fde) out << "," << r.fde;
    if (adv) out << "," << r.d_loss << "," << r.g_loss;
    if (resist) out << "," << r.resist;
    out << "\n";
  }
}

}  // namespace navigan
