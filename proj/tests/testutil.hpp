#pragma once

#include <functional>
#include <random>

#include "navigan/nn.hpp"

namespace navigan::testutil {

// Target of a central finite-difference gradient check. run(true) computes
// the loss, runs backward, and leaves gradients in the params; run(false)
// computes the loss only. It must rebuild the graph from the current
// parameter values on every call.
struct GradCheckTarget {
  std::function<double(bool with_grad)> run;
  std::vector<ad::Param*> params;
};

// Compares tape gradients against central differences on n_coords randomly
// chosen parameter coordinates; returns the worst relative error.

inline double max_rel_error(const GradCheckTarget& target, int n_coords, std::uint64_t seed,
                            double fd_step = 1e-6) {
  nn::zero_grads(target.params);
  target.run(true);

  std::vector<std::pair<std::size_t, Eigen::Index>> coords;
  for (std::size_t p = 0; p < target.params.size(); ++p)
    for (Eigen::Index i = 0; i < target.params[p]->value.size(); ++i) coords.emplace_back(p, i);

  std::mt19937_64 rng(seed);
  std::shuffle(coords.begin(), coords.end(), rng);
  const std::size_t n = std::min<std::size_t>(coords.size(), static_cast<std::size_t>(n_coords));

  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    auto [p, i] = coords[k];
    ad::Param& param = *target.params[p];
    const double analytic = param.grad.data()[i];
    const double saved = param.value.data()[i];
    param.value.data()[i] = saved + fd_step;
    const double plus = target.run(false);
    param.value.data()[i] = saved - fd_step;
    const double minus = target.run(false);
    param.value.data()[i] = saved;
    const double numeric = (plus - minus) / (2.0 * fd_step);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace navigan::testutil

#include "navigan/types.hpp"

namespace navigan::testutil {

// Small random training-sample fixture: target walking roughly +x, a few
// other agents (the last one with partial presence in the window).
inline TrainingSample make_sample(std::mt19937_64& rng, int t_obs = 8, int t_pred = 12,
                                  int n_others = 3) {
  TrainingSample s;
  s.target_id = 0;
  MaskedSeq target(static_cast<std::size_t>(t_obs));
  Vec2 p(0.0, 0.0);
  std::normal_distribution<double> step(0.0, 0.3);
  for (int t = 0; t < t_obs; ++t) {
    target[static_cast<std::size_t>(t)] = p;
    p += Vec2(0.3 + step(rng) * 0.1, step(rng) * 0.1);
  }
  s.observed[0] = target;
  for (int t = 0; t < t_pred; ++t) {
    s.future_truth.push_back(p);
    p += Vec2(0.3, step(rng) * 0.1);
  }
  s.goal = s.future_truth.back();
  for (int j = 1; j <= n_others; ++j) {
    MaskedSeq obs(static_cast<std::size_t>(t_obs));
    MaskedSeq fut(static_cast<std::size_t>(t_pred));
    Vec2 q(step(rng) * 3.0, step(rng) * 3.0);
    for (int t = 0; t < t_obs; ++t) {
      if (j == n_others && t < t_obs / 2) continue;  // partial presence
      obs[static_cast<std::size_t>(t)] = q;
      q += Vec2(step(rng) * 0.2, 0.25);
    }
    for (int t = 0; t < t_pred; ++t) {
      fut[static_cast<std::size_t>(t)] = q;
      q += Vec2(step(rng) * 0.2, 0.25);
    }
    s.observed[j] = obs;
    s.others_future[j] = fut;
  }
  return s;
}

}  // namespace navigan::testutil
