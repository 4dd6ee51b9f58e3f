#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "navigan/autodiff.hpp"

namespace navigan::nn {

using ad::Param;
using ad::Tape;
using ad::Vec;

struct Linear {
  Param W;  // out x in
  Param b;  // out x 1

  Linear() = default;
  Linear(Eigen::Index out, Eigen::Index in) : W(out, in), b(out, 1) {}

  Eigen::Index in_dim() const { return W.value.cols(); }
  Eigen::Index out_dim() const { return W.value.rows(); }

  Vec operator()(Tape& t, Vec x) const {
    if (x.size() != in_dim()) throw DimensionMismatch("Linear: input size mismatch");
    auto* self = const_cast<Linear*>(this);
    Eigen::VectorXd xv = x.value();
    return t.push(W.value * xv + b.value.col(0),
                  [self, x, xv](Tape& tp, const Eigen::VectorXd& g) {
                    tp.accumulate(x.id, self->W.value.transpose() * g);
                    self->W.grad += g * xv.transpose();
                    self->b.grad.col(0) += g;
                  });
  }

  void collect(std::vector<Param*>& out) {
    out.push_back(&W);
    out.push_back(&b);
  }
};

// Two-layer perceptron with ReLU hidden activation.
struct MLP {
  Linear l1, l2;

  MLP() = default;
  MLP(Eigen::Index in, Eigen::Index hidden, Eigen::Index out) : l1(hidden, in), l2(out, hidden) {}

  Vec operator()(Tape& t, Vec x) const { return l2(t, ad::relu_v(l1(t, x))); }

  Eigen::Index in_dim() const { return l1.in_dim(); }
  Eigen::Index out_dim() const { return l2.out_dim(); }

  void collect(std::vector<Param*>& out) {
    l1.collect(out);
    l2.collect(out);
  }
};

// Standard LSTM cell; gate order i, f, g, o in the stacked weight rows.
struct LSTMCell {
  Linear ih;  // 4H x in (carries the bias)
  Linear hh;  // 4H x H (bias kept at zero by init)
  Eigen::Index hidden = 0;

  LSTMCell() = default;
  LSTMCell(Eigen::Index in, Eigen::Index h) : ih(4 * h, in), hh(4 * h, h), hidden(h) {}

  std::pair<Vec, Vec> step(Tape& t, Vec x, Vec h, Vec c) const {
    if (h.size() != hidden || c.size() != hidden)
      throw DimensionMismatch("LSTMCell: state size mismatch");
    Vec gates = ad::add(ih(t, x), hh(t, h));
    Vec i = ad::sigmoid_v(ad::slice(gates, 0, hidden));
    Vec f = ad::sigmoid_v(ad::slice(gates, hidden, hidden));
    Vec g = ad::tanh_v(ad::slice(gates, 2 * hidden, hidden));
    Vec o = ad::sigmoid_v(ad::slice(gates, 3 * hidden, hidden));
    Vec c_next = ad::add(ad::hadamard(f, c), ad::hadamard(i, g));
    Vec h_next = ad::hadamard(o, ad::tanh_v(c_next));
    return {h_next, c_next};
  }

  void collect(std::vector<Param*>& out) {
    ih.collect(out);
    hh.collect(out);
  }
};

// ---- initialization -----------------------------------------------------------

inline void init_uniform(Param& p, std::mt19937_64& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(p.value.rows() + p.value.cols()));
  std::uniform_real_distribution<double> dist(-a, a);
  for (Eigen::Index j = 0; j < p.value.cols(); ++j)
    for (Eigen::Index i = 0; i < p.value.rows(); ++i) p.value(i, j) = dist(rng);
}

inline void init_linear(Linear& l, std::mt19937_64& rng) {
  init_uniform(l.W, rng);
  l.b.value.setZero();
}

inline void init_mlp(MLP& m, std::mt19937_64& rng) {
  init_linear(m.l1, rng);
  init_linear(m.l2, rng);
}

inline void init_lstm(LSTMCell& c, std::mt19937_64& rng) {
  init_linear(c.ih, rng);
  init_linear(c.hh, rng);
  // forget-gate bias at 1 for stable early memory
  c.ih.b.value.col(0).segment(c.hidden, c.hidden).setConstant(1.0);
}

// ---- optimizer ------------------------------------------------------------------

inline void zero_grads(const std::vector<Param*>& params) {
  for (Param* p : params) p->zero_grad();
}

inline double grad_norm(const std::vector<Param*>& params) {
  double sq = 0.0;
  for (const Param* p : params) sq += p->grad.squaredNorm();
  return std::sqrt(sq);
}

inline void clip_grad_norm(const std::vector<Param*>& params, double max_norm) {
  const double n = grad_norm(params);
  if (n > max_norm && n > 0.0) {
    const double k = max_norm / n;
    for (Param* p : params) p->grad *= k;
  }
}

class Adam {
 public:
  Adam(std::vector<Param*> params, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (Param* p : params_) {
      m_.emplace_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
      v_.emplace_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    }
  }

  void step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params_.size(); ++i) {
      Param& p = *params_[i];
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
      const Eigen::MatrixXd mhat = m_[i] / bc1;
      const Eigen::MatrixXd vhat = v_[i] / bc2;
      p.value -= lr_ * mhat.cwiseQuotient((vhat.cwiseSqrt().array() + eps_).matrix());
    }
  }

  const std::vector<Param*>& params() const { return params_; }

 private:
  std::vector<Param*> params_;
  double lr_, beta1_, beta2_, eps_;
  std::vector<Eigen::MatrixXd> m_, v_;
  int t_ = 0;
};

// FNV-1a over the raw parameter bytes; used to assert update isolation.
inline std::uint64_t param_hash(const std::vector<Param*>& params) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const unsigned char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= data[i];
      h *= 1099511628211ull;
    }
  };
  for (const Param* p : params)
    mix(reinterpret_cast<const unsigned char*>(p->value.data()),
        static_cast<std::size_t>(p->value.size()) * sizeof(double));
  return h;
}

}  // namespace navigan::nn
