#pragma once

#include "navigan/generator.hpp"

namespace navigan {

// Social-aware discriminator: per-step pooled context fed through D-LSTM,
// scored from the final hidden state. PoolNet parameters are its own, not
// shared with the generator.
struct DiscriminatorParams {
  nn::MLP state_embed;  // 2 -> hidden, shared across agents and steps
  PoolNetParams pool;   // context = hidden
  nn::LSTMCell d_lstm;  // pool_out -> hidden
  nn::MLP score_head;   // hidden -> 1
  ModelDims dims;

  DiscriminatorParams() = default;
  explicit DiscriminatorParams(const ModelDims& d)
      : state_embed(2, d.mlp_hidden, d.hidden),
        pool(d.hidden, d.pool_out),
        d_lstm(d.pool_out, d.hidden),
        score_head(d.hidden, d.mlp_hidden, 1),
        dims(d) {}

  void collect(std::vector<ad::Param*>& out) {
    state_embed.collect(out);
    pool.collect(out);
    d_lstm.collect(out);
    score_head.collect(out);
  }

  void init(std::mt19937_64& rng) {
    nn::init_mlp(state_embed, rng);
    pool.init(rng);
    nn::init_lstm(d_lstm, rng);
    nn::init_mlp(score_head, rng);
  }
};

// A full T_end-length sequence in the target-centric frame. The target states
// may be tape variables (generated waypoints) so adversarial gradients can
// flow back into the generator.
struct DiscriminatorInput {
  std::vector<ad::Vec> target_seq;          // length t_end
  std::vector<MaskedSeq> others_seq;        // each length t_end
};

// Builds the input from a sample plus a future for the target (either the
// ground truth or generated waypoints, as tape nodes).
inline DiscriminatorInput make_discriminator_input(ad::Tape& t, const TrainingSample& sample,
                                                   const std::vector<ad::Vec>& target_future) {
  DiscriminatorInput in;
  for (const auto& p : sample.observed.at(sample.target_id)) in.target_seq.push_back(ad::constant(t, *p));
  for (const auto& v : target_future) in.target_seq.push_back(v);

  for (const auto& [id, obs] : sample.observed) {
    if (id == sample.target_id) continue;
    MaskedSeq full = obs;
    auto fit = sample.others_future.find(id);
    if (fit != sample.others_future.end())
      full.insert(full.end(), fit->second.begin(), fit->second.end());
    else
      full.resize(obs.size() + sample.future_truth.size());
    in.others_seq.push_back(std::move(full));
  }
  return in;
}

inline ad::Vec discriminate(ad::Tape& t, const DiscriminatorParams& p,
                            const DiscriminatorInput& input) {
  if (input.target_seq.empty()) throw EmptySequence("discriminate: empty target sequence");
  const std::size_t t_end = input.target_seq.size();
  for (const auto& seq : input.others_seq)
    if (seq.size() != t_end) throw DimensionMismatch("discriminate: others_seq length mismatch");

  ad::Vec h = ad::zeros(t, p.dims.hidden);
  ad::Vec c = ad::zeros(t, p.dims.hidden);
  for (std::size_t step = 0; step < t_end; ++step) {
    std::vector<PoolItem> items;
    for (const auto& seq : input.others_seq) {
      if (!seq[step]) continue;  // absent agents excluded from this step's pool
      ad::Vec s_j = ad::constant(t, *seq[step]);
      items.push_back({ad::sub(s_j, input.target_seq[step]), p.state_embed(t, s_j)});
    }
    ad::Vec v_t = pool(t, p.pool, items);
    std::tie(h, c) = p.d_lstm.step(t, v_t, h, c);
  }
  return p.score_head(t, h);
}

}  // namespace navigan
