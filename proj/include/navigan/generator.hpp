#pragma once

#include "navigan/poolnet.hpp"
#include "navigan/types.hpp"

namespace navigan {

struct ModelDims {
  Eigen::Index hidden = 32;     // encoder LSTM hidden size
  Eigen::Index pool_out = 32;   // pooled context vector size
  Eigen::Index noise_dim = 8;   // fluctuation seed size
  Eigen::Index mlp_hidden = 64;

  Eigen::Index intent_hidden() const { return hidden + 2; }               // [h; g]
  Eigen::Index sf_hidden() const { return hidden + pool_out + noise_dim; }  // [h; V; f_fluct]
  Eigen::Index goal_social_hidden() const { return hidden + pool_out + 2; }

  bool operator==(const ModelDims&) const = default;
};

// Intention-force and social/fluctuation-force generators.
struct GeneratorParams {
  nn::LSTMCell enc_target;  // E_i: 2 -> hidden
  nn::LSTMCell intent_dec;  // I-LSTM: 2 -> hidden + 2
  nn::MLP nn_spatial;       // intent hidden -> 2
  nn::LSTMCell enc_social;  // E_s: 2 -> hidden
  nn::LSTMCell sf_dec;      // SF-LSTM: 2 -> hidden + pool_out + noise_dim
  nn::MLP nn_social;        // sf hidden -> 2
  PoolNetParams pool;       // context = hidden
  ModelDims dims;

  GeneratorParams() = default;
  explicit GeneratorParams(const ModelDims& d)
      : enc_target(2, d.hidden),
        intent_dec(2, d.intent_hidden()),
        nn_spatial(d.intent_hidden(), d.mlp_hidden, 2),
        enc_social(2, d.hidden),
        sf_dec(2, d.sf_hidden()),
        nn_social(d.sf_hidden(), d.mlp_hidden, 2),
        pool(d.hidden, d.pool_out),
        dims(d) {}

  void collect(std::vector<ad::Param*>& out) {
    enc_target.collect(out);
    intent_dec.collect(out);
    nn_spatial.collect(out);
    enc_social.collect(out);
    sf_dec.collect(out);
    nn_social.collect(out);
    pool.collect(out);
  }

  void init(std::mt19937_64& rng) {
    nn::init_lstm(enc_target, rng);
    nn::init_lstm(intent_dec, rng);
    nn::init_mlp(nn_spatial, rng);
    nn::init_lstm(enc_social, rng);
    nn::init_lstm(sf_dec, rng);
    nn::init_mlp(nn_social, rng);
    pool.init(rng);
  }
};

// Goal-Social-LSTM baseline: encoder-pool-decoder with the goal injected
// into the decoder initial hidden state after the pooling layer.
struct GoalSocialParams {
  nn::LSTMCell encoder;  // 2 -> hidden
  PoolNetParams pool;    // context = hidden
  nn::LSTMCell decoder;  // 2 -> hidden + pool_out + 2
  nn::MLP head;          // decoder hidden -> 2
  ModelDims dims;

  GoalSocialParams() = default;
  explicit GoalSocialParams(const ModelDims& d)
      : encoder(2, d.hidden),
        pool(d.hidden, d.pool_out),
        decoder(2, d.goal_social_hidden()),
        head(d.goal_social_hidden(), d.mlp_hidden, 2),
        dims(d) {}

  void collect(std::vector<ad::Param*>& out) {
    encoder.collect(out);
    pool.collect(out);
    decoder.collect(out);
    head.collect(out);
  }

  void init(std::mt19937_64& rng) {
    nn::init_lstm(encoder, rng);
    pool.init(rng);
    nn::init_lstm(decoder, rng);
    nn::init_mlp(head, rng);
  }
};

struct CellState {
  ad::Vec h;
  ad::Vec c;
};

// Runs the encoder recurrence from zero state over a point sequence.
inline CellState encode_sequence(ad::Tape& t, const nn::LSTMCell& cell,
                                 const std::vector<Vec2>& seq) {
  if (seq.empty()) throw EmptySequence("encode_sequence: empty sequence");
  ad::Vec h = ad::zeros(t, cell.hidden);
  ad::Vec c = ad::zeros(t, cell.hidden);
  for (const auto& p : seq) std::tie(h, c) = cell.step(t, ad::constant(t, p), h, c);
  return {h, c};
}

// Encoder over the present steps of a masked track, in order.
inline std::optional<CellState> encode_masked(ad::Tape& t, const nn::LSTMCell& cell,
                                              const MaskedSeq& seq) {
  std::vector<Vec2> present;
  for (const auto& p : seq)
    if (p) present.push_back(*p);
  if (present.empty()) return std::nullopt;
  return encode_sequence(t, cell, present);
}

// Decoder of the intention branch: hidden seeded with [h; g], cell zero,
// autoregressive on its own prediction starting from the last observed point.
inline std::vector<ad::Vec> intention_rollout(ad::Tape& t, const GeneratorParams& p,
                                              const CellState& target_state, const Vec2& goal,
                                              const Vec2& last_obs, int t_pred) {
  ad::Vec h = ad::concat({target_state.h, ad::constant(t, goal)});
  ad::Vec c = ad::zeros(t, p.dims.intent_hidden());
  ad::Vec prev = ad::constant(t, last_obs);
  std::vector<ad::Vec> path;
  path.reserve(static_cast<std::size_t>(t_pred));
  for (int step = 0; step < t_pred; ++step) {
    std::tie(h, c) = p.intent_dec.step(t, prev, h, c);
    prev = p.nn_spatial(t, h);
    path.push_back(prev);
  }
  return path;
}

namespace detail {

// Pool items for the generator: other agents present at the last observed
// step, context = their social-encoder state, displacement taken at T_obs.
inline std::vector<PoolItem> social_pool_items(ad::Tape& t, const nn::LSTMCell& enc,
                                               const TrainingSample& sample) {
  const auto& target_obs = sample.observed.at(sample.target_id);
  const Vec2 target_pos = *target_obs.back();
  std::vector<PoolItem> items;
  for (const auto& [id, seq] : sample.observed) {
    if (id == sample.target_id) continue;
    if (!seq.back()) continue;  // absent at T_obs: excluded from the pool
    auto state = encode_masked(t, enc, seq);
    if (!state) continue;
    items.push_back({ad::constant(t, Vec2(*seq.back() - target_pos)), state->h});
  }
  return items;
}

}  // namespace detail

// Social + fluctuation branch: encoder-pool-decoder emitting per-step forces.
inline std::vector<ad::Vec> social_rollout(ad::Tape& t, const GeneratorParams& p,
                                           const TrainingSample& sample,
                                           const Eigen::VectorXd& noise, int t_pred) {
  if (noise.size() != p.dims.noise_dim)
    throw DimensionMismatch("social_rollout: noise dimension mismatch");
  const auto& target_obs = sample.observed.at(sample.target_id);
  std::vector<Vec2> target_seq;
  for (const auto& pt : target_obs) target_seq.push_back(*pt);
  CellState target_state = encode_sequence(t, p.enc_social, target_seq);

  ad::Vec pooled = pool(t, p.pool, detail::social_pool_items(t, p.enc_social, sample));
  ad::Vec h = ad::concat({target_state.h, pooled, ad::constant(t, Eigen::VectorXd(noise))});
  ad::Vec c = ad::zeros(t, p.dims.sf_hidden());
  ad::Vec prev = ad::zeros(t, 2);
  std::vector<ad::Vec> forces;
  forces.reserve(static_cast<std::size_t>(t_pred));
  for (int step = 0; step < t_pred; ++step) {
    std::tie(h, c) = p.sf_dec.step(t, prev, h, c);
    prev = p.nn_social(t, h);
    forces.push_back(prev);
  }
  return forces;
}

struct GeneratorOutput {
  std::vector<ad::Vec> intention_path;  // t_pred points
  std::vector<ad::Vec> social_forces;   // t_pred 2-d vectors
  std::vector<ad::Vec> waypoints;       // intention_path + social_forces, elementwise
};

// Full forward pass; waypoints[t] = intention_path[t] + social_forces[t].
inline GeneratorOutput generate(ad::Tape& t, const GeneratorParams& p,
                                const TrainingSample& sample, const Eigen::VectorXd& noise) {
  const auto& target_obs = sample.observed.at(sample.target_id);
  std::vector<Vec2> target_seq;
  for (const auto& pt : target_obs) target_seq.push_back(*pt);
  const int t_pred = static_cast<int>(sample.future_truth.size());

  CellState enc = encode_sequence(t, p.enc_target, target_seq);
  GeneratorOutput out;
  out.intention_path = intention_rollout(t, p, enc, sample.goal, target_seq.back(), t_pred);
  out.social_forces = social_rollout(t, p, sample, noise, t_pred);
  out.waypoints.reserve(out.intention_path.size());
  for (std::size_t i = 0; i < out.intention_path.size(); ++i)
    out.waypoints.push_back(ad::add(out.intention_path[i], out.social_forces[i]));
  return out;
}

// Baseline Goal-Social-LSTM forward: one encoder-pool-decoder path.
inline std::vector<ad::Vec> goal_social_forward(ad::Tape& t, const GoalSocialParams& p,
                                                const TrainingSample& sample) {
  const auto& target_obs = sample.observed.at(sample.target_id);
  std::vector<Vec2> target_seq;
  for (const auto& pt : target_obs) target_seq.push_back(*pt);
  const int t_pred = static_cast<int>(sample.future_truth.size());

  CellState enc = encode_sequence(t, p.encoder, target_seq);
  const Vec2 target_pos = target_seq.back();
  std::vector<PoolItem> items;
  for (const auto& [id, seq] : sample.observed) {
    if (id == sample.target_id || !seq.back()) continue;
    auto state = encode_masked(t, p.encoder, seq);
    if (!state) continue;
    items.push_back({ad::constant(t, Vec2(*seq.back() - target_pos)), state->h});
  }
  ad::Vec pooled = pool(t, p.pool, items);

  ad::Vec h = ad::concat({enc.h, pooled, ad::constant(t, sample.goal)});
  ad::Vec c = ad::zeros(t, p.dims.goal_social_hidden());
  ad::Vec prev = ad::constant(t, target_pos);
  std::vector<ad::Vec> path;
  path.reserve(static_cast<std::size_t>(t_pred));
  for (int step = 0; step < t_pred; ++step) {
    std::tie(h, c) = p.decoder.step(t, prev, h, c);
    prev = p.head(t, h);
    path.push_back(prev);
  }
  return path;
}

inline std::vector<Vec2> values_of(const std::vector<ad::Vec>& seq) {
  std::vector<Vec2> out;
  out.reserve(seq.size());
  for (const auto& v : seq) out.emplace_back(v.value()(0), v.value()(1));
  return out;
}

}  // namespace navigan
