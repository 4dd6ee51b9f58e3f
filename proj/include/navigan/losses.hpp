#pragma once

#include "navigan/autodiff.hpp"
#include "navigan/types.hpp"

namespace navigan {

struct LossWeights {
  double w_l2 = 1.0;
  double w_fde = 1.0;
  double w_resist = 1.0;
  double w_adv = 1.0;
  double d_safe = 0.5;
};

// ---- tape-graph losses (used in training and gradient checks) ---------------

// || Y - Yhat ||_2 over the stacked residual.
inline ad::Vec l2_loss(ad::Tape& t, const std::vector<Vec2>& truth,
                       const std::vector<ad::Vec>& pred) {
  if (truth.size() != pred.size()) throw LengthMismatch("l2_loss: sequence length mismatch");
  std::vector<ad::Vec> residuals;
  residuals.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    residuals.push_back(ad::sub(pred[i], ad::constant(t, truth[i])));
  return ad::norm2(ad::concat(residuals));
}

// Final displacement of the intention branch against the last truth point.
inline ad::Vec fde_loss(ad::Tape& t, const Vec2& truth_final, ad::Vec intention_final) {
  return ad::norm2(ad::sub(intention_final, ad::constant(t, truth_final)));
}

// || max(d_safe - d_o, 0) ||_2 over every (step, present other agent) pair.
// Zero when no pair comes closer than d_safe (including the empty case).
inline ad::Vec resistance_loss(ad::Tape& t, const std::vector<ad::Vec>& waypoints,
                               const std::map<int, MaskedSeq>& others_future, double d_safe) {
  if (d_safe <= 0.0) throw std::invalid_argument("resistance_loss: d_safe must be > 0");
  std::vector<ad::Vec> terms;
  for (std::size_t step = 0; step < waypoints.size(); ++step) {
    for (const auto& [id, seq] : others_future) {
      if (step >= seq.size() || !seq[step]) continue;
      ad::Vec d_o = ad::norm2(ad::sub(waypoints[step], ad::constant(t, *seq[step])));
      terms.push_back(ad::relu_v(ad::sub(ad::scalar(t, d_safe), d_o)));
    }
  }
  if (terms.empty()) return ad::scalar(t, 0.0);
  return ad::norm2(ad::concat(terms));
}

// Non-saturating BCE with logistic link, in stable softplus form:
//   d_loss = softplus(-logit_real) + softplus(logit_fake)
//   g_loss = softplus(-logit_fake)
inline std::pair<ad::Vec, ad::Vec> adversarial_losses(ad::Tape& t, ad::Vec logit_real,
                                                      ad::Vec logit_fake) {
  ad::Vec d_loss = ad::add(ad::softplus(ad::scale(logit_real, -1.0)), ad::softplus(logit_fake));
  ad::Vec g_loss = ad::softplus(ad::scale(logit_fake, -1.0));
  return {d_loss, g_loss};
}

// ---- plain-value counterparts -----------------------------------------------

inline double l2_loss(const std::vector<Vec2>& truth, const std::vector<Vec2>& pred) {
  if (truth.size() != pred.size()) throw LengthMismatch("l2_loss: sequence length mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sq += (pred[i] - truth[i]).squaredNorm();
  return std::sqrt(sq);
}

inline double fde_loss(const Vec2& truth_final, const Vec2& intention_final) {
  return (truth_final - intention_final).norm();
}

inline double resistance_loss(const std::vector<Vec2>& waypoints,
                              const std::map<int, MaskedSeq>& others_future, double d_safe) {
  if (d_safe <= 0.0) throw std::invalid_argument("resistance_loss: d_safe must be > 0");
  double sq = 0.0;
  for (std::size_t step = 0; step < waypoints.size(); ++step) {
    for (const auto& [id, seq] : others_future) {
      if (step >= seq.size() || !seq[step]) continue;
      const double term = std::max(d_safe - (waypoints[step] - *seq[step]).norm(), 0.0);
      sq += term * term;
    }
  }
  return std::sqrt(sq);
}

inline std::pair<double, double> adversarial_losses(double logit_real, double logit_fake) {
  auto softplus = [](double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  };
  return {softplus(-logit_real) + softplus(logit_fake), softplus(-logit_fake)};
}

}  // namespace navigan
