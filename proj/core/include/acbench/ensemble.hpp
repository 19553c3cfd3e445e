#pragma once

#include <memory>
#include <span>
#include <vector>

#include "acbench/classifier.hpp"

namespace acbench::learn {

/// Weighted sum of member probability vectors, renormalized to sum 1.
/// Throws InvalidArgument on a class-count mismatch or invalid weights.
std::vector<double> ensemble_predict_proba(std::span<const std::shared_ptr<const Classifier>> members,
                                           std::span<const double> weights, std::span<const double> x);

/// Soft-voting ensemble over already fitted members.
class EnsembleModel final : public Classifier {
 public:
  /// Empty `weights` means equal weights.
  EnsembleModel(std::vector<std::shared_ptr<const Classifier>> members, std::vector<double> weights);

  ModelKind kind() const noexcept override { return ModelKind::Ensemble; }
  int class_count() const noexcept override { return class_count_; }
  std::vector<double> predict_proba(std::span<const double> x) const override;
  void save_body(ModelWriter& out) const override;
  static std::shared_ptr<const EnsembleModel> load(ModelReader& in, int class_count);

  const std::vector<std::shared_ptr<const Classifier>>& members() const noexcept { return members_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<std::shared_ptr<const Classifier>> members_;
  std::vector<double> weights_;
  int class_count_ = 0;
};

}  // namespace acbench::learn
