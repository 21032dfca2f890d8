#pragma once

// Fully connected Q-network: input -> ReLU(nn) -> ReLU(nn) -> 2 linear
// outputs, one Q-value per action. Column-major batches (one column per
// sample).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/rl/env.hpp"
#include "leosched/rl/policy.hpp"

namespace leosched::rl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct MlpGradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

class MlpPolicy final : public Policy {
 public:
  MlpPolicy() = default;

  /// layer_sizes = {input_dim, hidden..., 2}. Weights zero-initialised.
  explicit MlpPolicy(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("MLP needs at least two layer sizes");
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      weights_.push_back(Matrix::Zero(sizes_[l + 1], sizes_[l]));
      biases_.push_back(Vector::Zero(sizes_[l + 1]));
    }
  }

  /// Standard Q-network shape for a period of n contacts.
  static MlpPolicy for_contacts(std::size_t n_contacts, int hidden) {
    return MlpPolicy({static_cast<int>(3 + 2 * n_contacts), hidden, hidden, 2});
  }

  /// He-uniform hidden layers, small uniform output layer, zero biases.
  void randomize(Rng& rng) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      const double fan_in = static_cast<double>(weights_[l].cols());
      const bool output = l + 1 == weights_.size();
      const double limit = output ? 1.0 / std::sqrt(fan_in) : std::sqrt(6.0 / fan_in);
      for (Eigen::Index j = 0; j < weights_[l].cols(); ++j)
        for (Eigen::Index i = 0; i < weights_[l].rows(); ++i)
          weights_[l](i, j) = (2.0 * uniform01(rng) - 1.0) * limit;
      biases_[l].setZero();
    }
  }

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  std::size_t layers() const { return weights_.size(); }
  std::vector<Matrix>& weights() { return weights_; }
  std::vector<Vector>& biases() { return biases_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  const std::vector<Vector>& biases() const { return biases_; }

  /// Activations of every layer for a batch; acts[0] is the input,
  /// acts.back() the linear output.
  std::vector<Matrix> forward_batch(const Matrix& input) const {
    if (input.rows() != input_dim())
      throw std::invalid_argument("MLP input has " + std::to_string(input.rows()) +
                                  " rows, expected " + std::to_string(input_dim()));
    std::vector<Matrix> acts;
    acts.reserve(weights_.size() + 1);
    acts.push_back(input);
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Matrix z = weights_[l] * acts.back();
      z.colwise() += biases_[l];
      if (l + 1 < weights_.size()) z = z.cwiseMax(0.0);
      acts.push_back(std::move(z));
    }
    return acts;
  }

  std::array<double, 2> forward(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != input_dim())
      throw std::invalid_argument("MLP input has " + std::to_string(x.size()) +
                                  " entries, expected " + std::to_string(input_dim()));
    const Eigen::Map<const Vector> in(x.data(), static_cast<Eigen::Index>(x.size()));
    Vector a = in;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Vector z = weights_[l] * a + biases_[l];
      a = l + 1 < weights_.size() ? Vector(z.cwiseMax(0.0)) : z;
    }
    return {a(0), a(1)};
  }

  std::array<double, 2> q_values(const Observation& obs) const override {
    return forward(obs.flatten());
  }

  /// Backpropagates d(loss)/d(output) through cached activations.
  MlpGradients backward(const std::vector<Matrix>& acts, const Matrix& d_output) const {
    MlpGradients g;
    g.weights.resize(weights_.size());
    g.biases.resize(weights_.size());
    Matrix delta = d_output;
    for (std::size_t l = weights_.size(); l-- > 0;) {
      g.weights[l] = delta * acts[l].transpose();
      g.biases[l] = delta.rowwise().sum();
      if (l > 0) {
        Matrix upstream = weights_[l].transpose() * delta;
        // ReLU derivative taken from the post-activation value.
        delta = upstream.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
      }
    }
    return g;
  }

  /// w <- w - lr * (grad + l2 * w)
  void sgd_step(const MlpGradients& g, double lr, double l2) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      weights_[l] -= lr * (g.weights[l] + l2 * weights_[l]);
      biases_[l] -= lr * g.biases[l];
    }
  }

  /// this <- (1 - tau) * this + tau * source
  void soft_update_from(const MlpPolicy& source, double tau) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      weights_[l] = (1.0 - tau) * weights_[l] + tau * source.weights_[l];
      biases_[l] = (1.0 - tau) * biases_[l] + tau * source.biases_[l];
    }
  }

 private:
  std::vector<int> sizes_;
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
};

/// Global L2 norm of a gradient set.
inline double gradient_norm(const MlpGradients& g) {
  double s = 0.0;
  for (const auto& w : g.weights) s += w.squaredNorm();
  for (const auto& b : g.biases) s += b.squaredNorm();
  return std::sqrt(s);
}

inline void scale_gradients(MlpGradients& g, double factor) {
  for (auto& w : g.weights) w *= factor;
  for (auto& b : g.biases) b *= factor;
}

}  // namespace leosched::rl
