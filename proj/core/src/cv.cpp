#include "acbench/cv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "acbench/error.hpp"
#include "acbench/random.hpp"

namespace acbench::eval {

namespace {

template <class Pred>
std::vector<std::size_t> indices_where(std::size_t n, Pred pred) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (pred(i)) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> CVPlan::train_indices(int k) const {
  return indices_where(fold.size(), [&](std::size_t i) { return fold[i] >= 0 && fold[i] != k; });
}

std::vector<std::size_t> CVPlan::test_indices(int k) const {
  return indices_where(fold.size(), [&](std::size_t i) { return fold[i] == k; });
}

std::vector<std::size_t> CVPlan::pool_indices() const {
  return indices_where(fold.size(), [&](std::size_t i) { return fold[i] >= 0; });
}

std::vector<std::size_t> CVPlan::holdout_indices() const {
  return indices_where(fold.size(), [&](std::size_t i) { return holdout[i] != 0; });
}

std::vector<std::size_t> CVPlan::validation_indices() const {
  return indices_where(fold.size(), [&](std::size_t i) { return validation[i] != 0; });
}

CVPlan stratified_kfold(std::span<const int> y, int n_folds, std::uint64_t seed, const SplitOptions& options) {
  if (n_folds < 2) throw InvalidArgument("stratified_kfold: need at least 2 folds");
  const double hf = options.holdout_fraction;
  const double vf = options.validation_fraction;
  if (hf < 0.0 || vf < 0.0 || hf + vf >= 1.0) {
    throw InvalidArgument("stratified_kfold: holdout and validation fractions must be >= 0 and sum below 1");
  }
  CVPlan plan;
  plan.n_folds = n_folds;
  plan.seed = seed;
  plan.fold.assign(y.size(), -1);
  plan.holdout.assign(y.size(), 0);
  plan.validation.assign(y.size(), 0);

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0) throw InvalidArgument("stratified_kfold: negative label");
    by_class[y[i]].push_back(i);
  }

  std::size_t deal = 0;
  for (auto& [label, idx] : by_class) {
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n = static_cast<double>(idx.size());
    const auto n_hold = static_cast<std::size_t>(std::llround(hf * n));
    const auto n_val = static_cast<std::size_t>(std::llround(vf * n));
    if (n_hold + n_val + static_cast<std::size_t>(n_folds) > idx.size()) {
      throw InvalidArgument("stratified_kfold: class " + std::to_string(label) + " has " +
                            std::to_string(idx.size()) + " samples, too few for " + std::to_string(n_folds) +
                            " folds after holdout/validation");
    }
    std::size_t j = 0;
    for (; j < n_hold; ++j) plan.holdout[idx[j]] = 1;
    for (; j < n_hold + n_val; ++j) plan.validation[idx[j]] = 1;
    for (; j < idx.size(); ++j) plan.fold[idx[j]] = static_cast<int>(deal++ % static_cast<std::size_t>(n_folds));
  }
  return plan;
}

}  // namespace acbench::eval
