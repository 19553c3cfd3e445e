#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace acbench::eval {

struct SplitOptions {
  /// Fractions of the whole dataset, taken per class before folding.
  double holdout_fraction = 0.0;
  double validation_fraction = 0.0;
};

struct CVPlan {
  int n_folds = 0;
  std::uint64_t seed = 0;
  /// Fold per sample; -1 for holdout and validation samples.
  std::vector<int> fold;
  std::vector<std::uint8_t> holdout;
  std::vector<std::uint8_t> validation;

  std::vector<std::size_t> train_indices(int k) const;
  std::vector<std::size_t> test_indices(int k) const;
  /// Every sample assigned to some fold.
  std::vector<std::size_t> pool_indices() const;
  std::vector<std::size_t> holdout_indices() const;
  std::vector<std::size_t> validation_indices() const;

  friend bool operator==(const CVPlan&, const CVPlan&) = default;
};

/// Shuffles each class with a seeded generator, carves holdout then
/// validation samples from the front, and deals the rest round-robin over
/// the folds, continuing the deal position from one class to the next.
/// Throws InvalidArgument if a class has fewer than n_folds samples left.
CVPlan stratified_kfold(std::span<const int> y, int n_folds, std::uint64_t seed, const SplitOptions& options = {});

}  // namespace acbench::eval
