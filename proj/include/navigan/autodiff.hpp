#pragma once

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "navigan/types.hpp"

namespace navigan::ad {

// A trainable parameter matrix (vectors are n x 1) with its gradient
// accumulator. Tape operations write into grad during the backward pass.
struct Param {
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;

  Param() = default;
  Param(Eigen::Index rows, Eigen::Index cols)
      : value(Eigen::MatrixXd::Zero(rows, cols)), grad(Eigen::MatrixXd::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
};

class Tape;

// Handle to a vector-valued node on a tape. Scalars are 1-dim vectors.
struct Vec {
  Tape* tape = nullptr;
  int id = -1;

  const Eigen::VectorXd& value() const;
  Eigen::Index size() const { return value().size(); }
  double scalar() const {
    assert(size() == 1);
    return value()(0);
  }
};

// Reverse-mode tape over Eigen vectors.
class Tape {
 public:
  struct Node {
    Eigen::VectorXd value;
    Eigen::VectorXd grad;
    // Propagates this node's grad into parents / params; empty for leaves.
    std::function<void(Tape&, const Eigen::VectorXd&)> back;
  };

  Vec push(Eigen::VectorXd value, std::function<void(Tape&, const Eigen::VectorXd&)> back = {}) {
    Node n;
    n.grad = Eigen::VectorXd::Zero(value.size());
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Vec{this, static_cast<int>(nodes_.size()) - 1};
  }

  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  Node& node(int id) { return nodes_[static_cast<std::size_t>(id)]; }

  void accumulate(int id, const Eigen::VectorXd& g) { nodes_[static_cast<std::size_t>(id)].grad += g; }

  // Seeds d(out)/d(out) = 1 and sweeps the tape in reverse. out must be scalar.
  void backward(const Vec& out) {
    assert(out.tape == this && node(out.id).value.size() == 1);
    node(out.id).grad(0) += 1.0;
    for (int i = out.id; i >= 0; --i) {
      auto& n = nodes_[static_cast<std::size_t>(i)];
      if (n.back && n.grad.squaredNorm() != 0.0) n.back(*this, n.grad);
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<Node> nodes_;
};

inline const Eigen::VectorXd& Vec::value() const { return tape->node(id).value; }

// ---- leaf constructors ------------------------------------------------------

inline Vec constant(Tape& t, Eigen::VectorXd v) { return t.push(std::move(v)); }

inline Vec constant(Tape& t, const Vec2& p) {
  Eigen::VectorXd v(2);
  v << p.x(), p.y();
  return t.push(std::move(v));
}

inline Vec scalar(Tape& t, double x) { return t.push(Eigen::VectorXd::Constant(1, x)); }

inline Vec zeros(Tape& t, Eigen::Index n) { return t.push(Eigen::VectorXd::Zero(n)); }

// ---- elementwise / structural ops -------------------------------------------

inline Vec add(Vec a, Vec b) {
  if (a.size() != b.size()) throw DimensionMismatch("add: size mismatch");
  Tape& t = *a.tape;
  return t.push(a.value() + b.value(), [a, b](Tape& tp, const Eigen::VectorXd& g) {
    tp.accumulate(a.id, g);
    tp.accumulate(b.id, g);
  });
}

inline Vec sub(Vec a, Vec b) {
  if (a.size() != b.size()) throw DimensionMismatch("sub: size mismatch");
  Tape& t = *a.tape;
  return t.push(a.value() - b.value(), [a, b](Tape& tp, const Eigen::VectorXd& g) {
    tp.accumulate(a.id, g);
    tp.accumulate(b.id, -g);
  });
}

inline Vec hadamard(Vec a, Vec b) {
  if (a.size() != b.size()) throw DimensionMismatch("hadamard: size mismatch");
  Tape& t = *a.tape;
  Eigen::VectorXd av = a.value(), bv = b.value();
  return t.push(av.cwiseProduct(bv), [a, b, av, bv](Tape& tp, const Eigen::VectorXd& g) {
    tp.accumulate(a.id, g.cwiseProduct(bv));
    tp.accumulate(b.id, g.cwiseProduct(av));
  });
}

inline Vec scale(Vec a, double k) {
  Tape& t = *a.tape;
  return t.push(a.value() * k,
                [a, k](Tape& tp, const Eigen::VectorXd& g) { tp.accumulate(a.id, g * k); });
}

inline Vec concat(const std::vector<Vec>& parts) {
  assert(!parts.empty());
  Tape& t = *parts.front().tape;
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.size();
  Eigen::VectorXd v(total);
  std::vector<std::pair<int, Eigen::Index>> layout;
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    v.segment(off, p.size()) = p.value();
    layout.emplace_back(p.id, p.size());
    off += p.size();
  }
  return t.push(std::move(v), [layout](Tape& tp, const Eigen::VectorXd& g) {
    Eigen::Index off = 0;
    for (const auto& [id, n] : layout) {
      tp.accumulate(id, g.segment(off, n));
      off += n;
    }
  });
}

inline Vec slice(Vec a, Eigen::Index begin, Eigen::Index count) {
  assert(begin >= 0 && begin + count <= a.size());
  Tape& t = *a.tape;
  const Eigen::Index total = a.size();
  return t.push(a.value().segment(begin, count),
                [a, begin, count, total](Tape& tp, const Eigen::VectorXd& g) {
                  Eigen::VectorXd full = Eigen::VectorXd::Zero(total);
                  full.segment(begin, count) = g;
                  tp.accumulate(a.id, full);
                });
}

// ---- nonlinearities ----------------------------------------------------------

inline Vec tanh_v(Vec a) {
  Tape& t = *a.tape;
  Eigen::VectorXd y = a.value().array().tanh();
  return t.push(y, [a, y](Tape& tp, const Eigen::VectorXd& g) {
    tp.accumulate(a.id, g.cwiseProduct((1.0 - y.array().square()).matrix()));
  });
}

inline Vec sigmoid_v(Vec a) {
  Tape& t = *a.tape;
  Eigen::VectorXd y = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  return t.push(y, [a, y](Tape& tp, const Eigen::VectorXd& g) {
    tp.accumulate(a.id, g.cwiseProduct((y.array() * (1.0 - y.array())).matrix()));
  });
}

inline Vec relu_v(Vec a) {
  Tape& t = *a.tape;
  Eigen::VectorXd x = a.value();
  return t.push(x.cwiseMax(0.0), [a, x](Tape& tp, const Eigen::VectorXd& g) {
    Eigen::VectorXd masked = g;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) <= 0.0) masked(i) = 0.0;
    tp.accumulate(a.id, masked);
  });
}

// Numerically stable softplus, log(1 + e^x); grad is sigmoid(x).
inline Vec softplus(Vec a) {
  Tape& t = *a.tape;
  Eigen::VectorXd x = a.value();
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    y(i) = x(i) > 0.0 ? x(i) + std::log1p(std::exp(-x(i))) : std::log1p(std::exp(x(i)));
  return t.push(std::move(y), [a, x](Tape& tp, const Eigen::VectorXd& g) {
    Eigen::VectorXd s = (1.0 / (1.0 + (-x.array()).exp())).matrix();
    tp.accumulate(a.id, g.cwiseProduct(s));
  });
}

// ---- reductions ---------------------------------------------------------------

inline Vec sum(Vec a) {
  Tape& t = *a.tape;
  const Eigen::Index n = a.size();
  return t.push(Eigen::VectorXd::Constant(1, a.value().sum()),
                [a, n](Tape& tp, const Eigen::VectorXd& g) {
                  tp.accumulate(a.id, Eigen::VectorXd::Constant(n, g(0)));
                });
}

inline Vec dot(Vec a, Vec b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
  Tape& t = *a.tape;
  Eigen::VectorXd av = a.value(), bv = b.value();
  return t.push(Eigen::VectorXd::Constant(1, av.dot(bv)),
                [a, b, av, bv](Tape& tp, const Eigen::VectorXd& g) {
                  tp.accumulate(a.id, g(0) * bv);
                  tp.accumulate(b.id, g(0) * av);
                });
}

// Euclidean norm; subgradient 0 at the origin.
inline Vec norm2(Vec a) {
  Tape& t = *a.tape;
  Eigen::VectorXd v = a.value();
  const double n = v.norm();
  return t.push(Eigen::VectorXd::Constant(1, n), [a, v, n](Tape& tp, const Eigen::VectorXd& g) {
    if (n > 0.0) tp.accumulate(a.id, (g(0) / n) * v);
  });
}

// Elementwise max over a set of equally sized vectors; gradient routes to the
// first maximal argument per coordinate.
inline Vec max_pool(const std::vector<Vec>& items) {
  assert(!items.empty());
  Tape& t = *items.front().tape;
  const Eigen::Index n = items.front().size();
  for (const auto& it : items)
    if (it.size() != n) throw DimensionMismatch("max_pool: size mismatch");

  Eigen::VectorXd v = items.front().value();
  std::vector<int> argmax(static_cast<std::size_t>(n), 0);
  for (std::size_t j = 1; j < items.size(); ++j) {
    const Eigen::VectorXd& w = items[j].value();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w(i) > v(i)) {
        v(i) = w(i);
        argmax[static_cast<std::size_t>(i)] = static_cast<int>(j);
      }
    }
  }
  std::vector<int> ids(items.size());
  for (std::size_t j = 0; j < items.size(); ++j) ids[j] = items[j].id;
  return t.push(std::move(v), [ids, argmax, n](Tape& tp, const Eigen::VectorXd& g) {
    std::vector<Eigen::VectorXd> parts(ids.size(), Eigen::VectorXd::Zero(n));
    for (Eigen::Index i = 0; i < n; ++i) parts[static_cast<std::size_t>(argmax[static_cast<std::size_t>(i)])](i) = g(i);
    for (std::size_t j = 0; j < ids.size(); ++j) tp.accumulate(ids[j], parts[j]);
  });
}

}  // namespace navigan::ad
