#pragma once

#include <numeric>

#include "navigan/bundle.hpp"
#include "navigan/losses.hpp"

namespace navigan {

struct TrainConfig {
  int batch_size = 32;
  int epochs = 500;
  double learning_rate = 0.001;
  Variant variant = Variant::NAVIGAN;
  std::uint64_t seed = 0;
  double grad_clip = 10.0;
  int checkpoint_every = 0;  // 0 = final checkpoint only
  ModelDims dims;
};

struct EpochRecord {
  int epoch = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;  // adversarial generator term
  double l2 = 0.0;
  double fde = 0.0;
  double resist = 0.0;
};

struct TrainResult {
  ModelBundle bundle;
  std::vector<EpochRecord> log;
};

namespace detail {

inline Eigen::VectorXd draw_noise(std::mt19937_64& rng, Eigen::Index dim, bool enabled) {
  Eigen::VectorXd n = Eigen::VectorXd::Zero(dim);
  if (enabled) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (Eigen::Index i = 0; i < dim; ++i) n(i) = dist(rng);
  }
  return n;
}

struct ForwardResult {
  std::vector<ad::Vec> waypoints;
  std::vector<ad::Vec> intention;  // empty for the goal-social baseline
};

inline ForwardResult forward_variant(ad::Tape& t, ModelBundle& bundle,
                                     const TrainingSample& sample,
                                     const Eigen::VectorXd& noise) {
  if (bundle.variant == Variant::GOAL_SOCIAL)
    return {goal_social_forward(t, bundle.goal_social, sample), {}};
  GeneratorOutput out = generate(t, bundle.gen, sample, noise);
  return {out.waypoints, out.intention_path};
}

inline void check_finite(double x, const char* what) {
  if (!std::isfinite(x))
    throw DivergenceDetected(std::string(what) + " is non-finite; aborting training");
}

}  // namespace detail

// Alternating adversarial training over windowed samples. Deterministic given
// (samples, cfg, weights) on one platform: all randomness flows from cfg.seed.
inline TrainResult train(const std::vector<TrainingSample>& samples, const TrainConfig& cfg,
                         const LossWeights& weights,
                         const std::function<void(const EpochRecord&, ModelBundle&)>& on_epoch = {}) {
  if (samples.empty()) throw EmptySet("train: no samples");

  TrainResult result{ModelBundle(cfg.variant, cfg.dims), {}};
  ModelBundle& bundle = result.bundle;
  bundle.init(cfg.seed);

  const bool adversarial = uses_adversary(cfg.variant) && weights.w_adv > 0.0;
  const bool with_noise = uses_noise(cfg.variant);
  const bool with_fde = cfg.variant != Variant::GOAL_SOCIAL;
  const double w_resist = cfg.variant == Variant::NAVIGAN_R ? weights.w_resist : 0.0;

  auto gen_params = bundle.generator_params();
  auto disc_params = bundle.discriminator_params();
  nn::Adam gen_opt(gen_params, cfg.learning_rate);
  nn::Adam disc_opt(disc_params, cfg.learning_rate);

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord rec;
    rec.epoch = epoch;
    std::size_t n_batches = 0;

    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      const double inv_n = 1.0 / static_cast<double>(end - begin);
      ++n_batches;

      // -- discriminator step on real futures vs detached generated waypoints
      if (adversarial) {
        nn::zero_grads(disc_params);
        double d_acc = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
          const TrainingSample& s = samples[order[k]];
          std::vector<Vec2> fake;
          {
            ad::Tape fwd;  // detached: values only, no gradient into the generator
            auto noise = detail::draw_noise(rng, bundle.dims.noise_dim, with_noise);
            fake = values_of(detail::forward_variant(fwd, bundle, s, noise).waypoints);
          }
          ad::Tape t;
          std::vector<ad::Vec> truth_vecs, fake_vecs;
          for (const auto& p : s.future_truth) truth_vecs.push_back(ad::constant(t, p));
          for (const auto& p : fake) fake_vecs.push_back(ad::constant(t, p));
          ad::Vec logit_real = discriminate(t, bundle.disc, make_discriminator_input(t, s, truth_vecs));
          ad::Vec logit_fake = discriminate(t, bundle.disc, make_discriminator_input(t, s, fake_vecs));
          auto [d_loss, g_loss_unused] = adversarial_losses(t, logit_real, logit_fake);
          d_acc += d_loss.scalar();
          t.backward(ad::scale(d_loss, inv_n));
        }
        detail::check_finite(d_acc, "discriminator loss");
        nn::clip_grad_norm(disc_params, cfg.grad_clip);
        disc_opt.step();
        rec.d_loss += d_acc * inv_n;
      }

      // -- generator step; discriminator grads discarded, not applied
      nn::zero_grads(gen_params);
      nn::zero_grads(disc_params);
      double l2_acc = 0.0, fde_acc = 0.0, res_acc = 0.0, adv_acc = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const TrainingSample& s = samples[order[k]];
        ad::Tape t;
        auto noise = detail::draw_noise(rng, bundle.dims.noise_dim, with_noise);
        auto fwd = detail::forward_variant(t, bundle, s, noise);

        ad::Vec loss = ad::scale(l2_loss(t, s.future_truth, fwd.waypoints), weights.w_l2);
        l2_acc += loss.scalar() / std::max(weights.w_l2, 1e-300);
        if (with_fde) {
          ad::Vec fde = fde_loss(t, s.future_truth.back(), fwd.intention.back());
          fde_acc += fde.scalar();
          loss = ad::add(loss, ad::scale(fde, weights.w_fde));
        }
        if (w_resist > 0.0) {
          ad::Vec res = resistance_loss(t, fwd.waypoints, s.others_future, weights.d_safe);
          res_acc += res.scalar();
          loss = ad::add(loss, ad::scale(res, w_resist));
        }
        if (adversarial) {
          ad::Vec logit_fake =
              discriminate(t, bundle.disc, make_discriminator_input(t, s, fwd.waypoints));
          ad::Vec g_adv = ad::softplus(ad::scale(logit_fake, -1.0));
          adv_acc += g_adv.scalar();
          loss = ad::add(loss, ad::scale(g_adv, weights.w_adv));
        }
        detail::check_finite(loss.scalar(), "generator loss");
        t.backward(ad::scale(loss, inv_n));
      }
      nn::clip_grad_norm(gen_params, cfg.grad_clip);
      gen_opt.step();
      nn::zero_grads(disc_params);

      rec.l2 += l2_acc * inv_n;
      rec.fde += fde_acc * inv_n;
      rec.resist += res_acc * inv_n;
      rec.g_loss += adv_acc * inv_n;
    }

    const double inv_b = 1.0 / static_cast<double>(n_batches);
    rec.d_loss *= inv_b;
    rec.g_loss *= inv_b;
    rec.l2 *= inv_b;
    rec.fde *= inv_b;
    rec.resist *= inv_b;
    result.log.push_back(rec);
    if (on_epoch) on_epoch(rec, bundle);
  }
  return result;
}

}  // namespace navigan
