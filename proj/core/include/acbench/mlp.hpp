#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "acbench/classifier.hpp"

namespace acbench::learn {

enum class Activation { Relu, Tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

struct MlpParams {
  int hidden1 = 64;
  int hidden2 = 32;
  Activation activation = Activation::Relu;
  int epochs = 100;
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 32;
  /// L2 penalty on weights (not biases).
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

/// Two hidden layers and a softmax head with all parameters in one flat
/// vector laid out as W1, b1, W2, b2, W3, b3 (weights row-major, out x in).
class MlpNetwork {
 public:
  MlpNetwork(std::size_t inputs, std::size_t hidden1, std::size_t hidden2, std::size_t outputs,
             Activation activation);

  std::size_t inputs() const noexcept { return sizes_[0]; }
  std::size_t hidden1() const noexcept { return sizes_[1]; }
  std::size_t hidden2() const noexcept { return sizes_[2]; }
  std::size_t outputs() const noexcept { return sizes_[3]; }
  Activation activation() const noexcept { return activation_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  /// He initialization for ReLU, Glorot for tanh; biases zero.
  void initialize(std::uint64_t seed);

  std::vector<double> forward(std::span<const double> x) const;

  /// Mean cross-entropy over `rows` plus l2/2 * |W|^2. Writes d(loss)/d(params)
  /// into `grad` (resized to parameter_count()) when it is non-null.
  double loss_and_gradient(const Matrix& x, std::span<const int> y, std::span<const std::size_t> rows,
                           double l2, std::vector<double>* grad) const;

 private:
  std::size_t offset(int layer, bool bias) const noexcept;

  std::size_t sizes_[4];
  Activation activation_;
  std::vector<double> params_;
};

class MlpModel final : public Classifier {
 public:
  MlpModel(MlpNetwork net, std::vector<double> loss_history);

  ModelKind kind() const noexcept override { return ModelKind::MLP; }
  int class_count() const noexcept override { return static_cast<int>(net_.outputs()); }
  std::vector<double> predict_proba(std::span<const double> x) const override;
  void save_body(ModelWriter& out) const override;
  static std::shared_ptr<const MlpModel> load(ModelReader& in, int class_count);

  const MlpNetwork& network() const noexcept { return net_; }
  /// Mean training loss after each epoch.
  const std::vector<double>& loss_history() const noexcept { return history_; }

 private:
  MlpNetwork net_;
  std::vector<double> history_;
};

/// Mini-batch SGD with momentum. Throws ConvergenceError if the loss becomes
/// non-finite.
std::shared_ptr<const MlpModel> mlp_train(const Matrix& x, std::span<const int> y,
                                          const MlpParams& params, int class_count = 0);

}  // namespace acbench::learn
