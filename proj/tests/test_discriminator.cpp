#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "navigan/discriminator.hpp"
#include "navigan/losses.hpp"
#include "testutil.hpp"

using namespace navigan;
using testutil::make_sample;

namespace {

ModelDims small_dims() {
  ModelDims d;
  d.hidden = 6;
  d.pool_out = 5;
  d.noise_dim = 3;
  d.mlp_hidden = 8;
  return d;
}

ad::Vec score_truth(ad::Tape& t, const DiscriminatorParams& p, const TrainingSample& s) {
  std::vector<ad::Vec> truth;
  for (const auto& pt : s.future_truth) truth.push_back(ad::constant(t, pt));
  return discriminate(t, p, make_discriminator_input(t, s, truth));
}

}  // namespace

TEST_CASE("discriminate: finite scalar logit, deterministic") {
  std::mt19937_64 rng(31);
  DiscriminatorParams p(small_dims());
  p.init(rng);
  auto sample = make_sample(rng);
  ad::Tape t1, t2;
  ad::Vec a = score_truth(t1, p, sample);
  ad::Vec b = score_truth(t2, p, sample);
  CHECK(a.size() == 1);
  CHECK(std::isfinite(a.scalar()));
  CHECK(a.scalar() == b.scalar());
}

TEST_CASE("discriminate: rejects an empty sequence") {
  std::mt19937_64 rng(32);
  DiscriminatorParams p(small_dims());
  p.init(rng);
  ad::Tape t;
  CHECK_THROWS_AS(discriminate(t, p, DiscriminatorInput{}), EmptySequence);
}

TEST_CASE("discriminate: permutation over other agents leaves the logit bit-exact") {
  std::mt19937_64 rng(33);
  DiscriminatorParams p(small_dims());
  p.init(rng);
  auto sample = make_sample(rng, 8, 12, 5);

  TrainingSample permuted = sample;
  permuted.observed.clear();
  permuted.others_future.clear();
  permuted.observed[0] = sample.observed.at(0);
  for (const auto& [id, seq] : sample.observed)
    if (id != 0) permuted.observed[100 - id] = seq;
  for (const auto& [id, seq] : sample.others_future) permuted.others_future[100 - id] = seq;

  ad::Tape t1, t2;
  CHECK(score_truth(t1, p, sample).scalar() == score_truth(t2, p, permuted).scalar());
}

TEST_CASE("discriminate: gradient matches finite differences") {
  std::mt19937_64 rng(34);
  DiscriminatorParams p(small_dims());
  p.init(rng);
  auto sample = make_sample(rng, 5, 4, 2);

  std::vector<ad::Param*> params;
  p.collect(params);
  testutil::GradCheckTarget target;
  target.params = params;
  target.run = [&](bool with_grad) {
    ad::Tape t;
    ad::Vec logit = score_truth(t, p, sample);
    auto [d_loss, g_loss] = adversarial_losses(t, logit, ad::scale(logit, -0.5));
    if (with_grad) t.backward(d_loss);
    return d_loss.scalar();
  };
  CHECK(testutil::max_rel_error(target, 30, 55) < 1e-3);
}

TEST_CASE("toy-trained discriminator separates expert futures from random walks") {
  std::mt19937_64 rng(35);
  DiscriminatorParams p(small_dims());
  p.init(rng);

  std::vector<TrainingSample> samples;
  for (int i = 0; i < 12; ++i) samples.push_back(make_sample(rng, 6, 6, 2));

  auto random_walk_future = [&](const TrainingSample& s, std::mt19937_64& r) {
    std::normal_distribution<double> jump(0.0, 0.8);
    std::vector<Vec2> fake;
    Vec2 cur = *s.observed.at(s.target_id).back();
    for (std::size_t i = 0; i < s.future_truth.size(); ++i) {
      cur += Vec2(jump(r), jump(r));
      fake.push_back(cur);
    }
    return fake;
  };

  std::vector<ad::Param*> params;
  p.collect(params);
  nn::Adam opt(params, 0.01);
  for (int epoch = 0; epoch < 60; ++epoch) {
    nn::zero_grads(params);
    for (const auto& s : samples) {
      ad::Tape t;
      std::vector<ad::Vec> truth, fake;
      for (const auto& pt : s.future_truth) truth.push_back(ad::constant(t, pt));
      for (const auto& pt : random_walk_future(s, rng)) fake.push_back(ad::constant(t, pt));
      ad::Vec logit_real = discriminate(t, p, make_discriminator_input(t, s, truth));
      ad::Vec logit_fake = discriminate(t, p, make_discriminator_input(t, s, fake));
      auto [d_loss, g_loss] = adversarial_losses(t, logit_real, logit_fake);
      t.backward(ad::scale(d_loss, 1.0 / static_cast<double>(samples.size())));
    }
    opt.step();
  }

  double mean_real = 0.0, mean_fake = 0.0;
  std::mt19937_64 eval_rng(99);
  for (const auto& s : samples) {
    ad::Tape t;
    mean_real += score_truth(t, p, s).scalar();
    std::vector<ad::Vec> fake;
    for (const auto& pt : random_walk_future(s, eval_rng)) fake.push_back(ad::constant(t, pt));
    mean_fake += discriminate(t, p, make_discriminator_input(t, s, fake)).scalar();
  }
  CHECK(mean_real / 12.0 > mean_fake / 12.0);
}
