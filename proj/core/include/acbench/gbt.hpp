#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "acbench/classifier.hpp"

namespace acbench::learn {

struct GbtParams {
  int n_rounds = 100;
  /// Shrinkage applied to every leaf weight, in (0, 1].
  double learning_rate = 0.1;
  int max_depth = 3;
  /// Penalty per leaf; a split must reduce the objective by more than this.
  double gamma = 0.0;
  /// L2 penalty on leaf weights.
  double lambda = 1.0;
  /// Minimum hessian sum in each child.
  double min_child_weight = 1.0;
  std::uint64_t seed = 0;
};

struct RegressionNode {
  /// -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  /// Leaf output, already scaled by the learning rate.
  double value = 0.0;
};

struct RegressionTree {
  std::vector<RegressionNode> nodes;

  double predict(std::span<const double> x) const;
  std::size_t leaf_count() const;
  /// gamma * T + lambda / 2 * sum(value^2) over leaves.
  double penalty(double gamma, double lambda) const;
};

/// Per-feature row orderings by ascending value, shared by every tree.
std::vector<std::vector<std::size_t>> presort_columns(const Matrix& x);

/// Fits one tree to gradients g and hessians h by level-wise exact greedy
/// search. Leaf weights are -G / (H + lambda) multiplied by `scale`.
RegressionTree fit_regression_tree(const Matrix& x, const std::vector<std::vector<std::size_t>>& sorted,
                                   std::span<const double> g, std::span<const double> h,
                                   const GbtParams& params, double scale);

class BoostedModel final : public Classifier {
 public:
  /// trees[round][class]
  BoostedModel(std::vector<std::vector<RegressionTree>> trees, int class_count, double gamma,
               double lambda, std::vector<double> objective_history);

  ModelKind kind() const noexcept override { return ModelKind::GBT; }
  int class_count() const noexcept override { return class_count_; }
  std::vector<double> predict_proba(std::span<const double> x) const override;
  void save_body(ModelWriter& out) const override;
  static std::shared_ptr<const BoostedModel> load(ModelReader& in, int class_count);

  /// Raw additive scores per class.
  std::vector<double> scores(std::span<const double> x) const;
  const std::vector<std::vector<RegressionTree>>& trees() const noexcept { return trees_; }
  /// Regularized training objective (cross-entropy plus the penalty of every
  /// tree so far); entry 0 is the objective before any round.
  const std::vector<double>& objective_history() const noexcept { return history_; }

 private:
  std::vector<std::vector<RegressionTree>> trees_;
  int class_count_;
  double gamma_;
  double lambda_;
  std::vector<double> history_;
};

/// Softmax cross-entropy summed over samples for raw scores (row per sample).
double softmax_cross_entropy(const Matrix& scores, std::span<const int> y);

std::shared_ptr<const BoostedModel> gbt_train(const Matrix& x, std::span<const int> y,
                                              const GbtParams& params, int class_count = 0);

}  // namespace acbench::learn
