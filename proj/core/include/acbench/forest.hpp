#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "acbench/classifier.hpp"

namespace acbench::learn {

struct ForestParams {
  int n_trees = 100;
  /// 0 grows until leaves are pure.
  int max_depth = 0;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  /// Features examined per split; 0 selects floor(sqrt(n_features)).
  int mtry = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// floor(sqrt(n)), at least 1.
int default_mtry(std::size_t n_features) noexcept;

struct TreeNode {
  /// -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  /// Majority class of the training samples reaching this node.
  int label = 0;
};

/// CART classification tree; samples with x[feature] <= threshold go left.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  int predict(std::span<const double> x) const;
  std::size_t leaf_count() const;
  int depth() const;
};

struct TreeFit {
  DecisionTree tree;
  /// Total weighted Gini decrease per feature.
  std::vector<double> impurity_decrease;
};

/// Grows one Gini tree on `rows` of x. Each node visits features in a fresh
/// random order and evaluates the first `mtry` that are non-constant there.
TreeFit grow_tree(const Matrix& x, std::span<const int> y, int class_count,
                  std::span<const std::size_t> rows, const ForestParams& params,
                  std::uint64_t seed);

class ForestModel final : public Classifier {
 public:
  ForestModel(std::vector<DecisionTree> trees, std::vector<double> importance, int class_count);

  ModelKind kind() const noexcept override { return ModelKind::RF; }
  int class_count() const noexcept override { return class_count_; }
  /// Fraction of trees voting for each class.
  std::vector<double> predict_proba(std::span<const double> x) const override;
  void save_body(ModelWriter& out) const override;
  static std::shared_ptr<const ForestModel> load(ModelReader& in, int class_count);

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  /// Mean impurity decrease per feature; non-negative, sums to 1.
  const std::vector<double>& feature_importance() const noexcept { return importance_; }

 private:
  std::vector<DecisionTree> trees_;
  std::vector<double> importance_;
  int class_count_;
};

std::shared_ptr<const ForestModel> rf_train(const Matrix& x, std::span<const int> y,
                                            const ForestParams& params, int class_count = 0);

}  // namespace acbench::learn
