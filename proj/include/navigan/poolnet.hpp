#pragma once

#include "navigan/nn.hpp"

namespace navigan {

// Displacement-sensitive pooling of other-agent context into one fixed-size
// vector, shared in structure by the social-force generator and the
// discriminator (separate parameter sets).
struct PoolNetParams {
  nn::MLP nn_pos;    // 2 -> pos_embed
  nn::MLP nn_embed;  // (context + pos_embed) -> output
  Eigen::Index context_dim = 32;
  Eigen::Index out_dim = 32;

  PoolNetParams() = default;
  PoolNetParams(Eigen::Index context, Eigen::Index out, Eigen::Index pos_embed = 16,
                Eigen::Index hidden = 64)
      : nn_pos(2, hidden, pos_embed),
        nn_embed(context + pos_embed, hidden, out),
        context_dim(context),
        out_dim(out) {}

  void collect(std::vector<ad::Param*>& out) {
    nn_pos.collect(out);
    nn_embed.collect(out);
  }

  void init(std::mt19937_64& rng) {
    nn::init_mlp(nn_pos, rng);
    nn::init_mlp(nn_embed, rng);
  }
};

// One other agent as seen by the pool: displacement from the target and a
// context vector (the agent's encoder state or a per-step state embedding).
struct PoolItem {
  ad::Vec displacement;  // 2
  ad::Vec context;       // context_dim
};

// e_ij = NN_embed([context_j ; NN_pos(d_ij)]), V = elementwise max over j.
// An empty crowd pools to the zero vector.
inline ad::Vec pool(ad::Tape& t, const PoolNetParams& p, const std::vector<PoolItem>& others) {
  if (others.empty()) return ad::zeros(t, p.out_dim);
  std::vector<ad::Vec> embeddings;
  embeddings.reserve(others.size());
  for (const auto& o : others) {
    if (o.context.size() != p.context_dim)
      throw DimensionMismatch("pool: context vector has wrong dimension");
    if (o.displacement.size() != 2) throw DimensionMismatch("pool: displacement must be 2-d");
    ad::Vec pos = p.nn_pos(t, o.displacement);
    embeddings.push_back(p.nn_embed(t, ad::concat({o.context, pos})));
  }
  return ad::max_pool(embeddings);
}

}  // namespace navigan
