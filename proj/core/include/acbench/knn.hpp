#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "acbench/classifier.hpp"

namespace acbench::learn {

enum class Distance { Euclidean, Manhattan, Cosine };

std::string_view to_string(Distance d);
Distance parse_distance(std::string_view text);

/// Distance between two vectors. Cosine distance is 1 - cos(angle) and is 1
/// whenever either vector is zero.
double distance(Distance metric, std::span<const double> a, std::span<const double> b);

struct KnnParams {
  int k = 7;
  Distance metric = Distance::Euclidean;
};

class KnnModel final : public Classifier {
 public:
  KnnModel(Matrix x, std::vector<int> y, int class_count, KnnParams params);

  ModelKind kind() const noexcept override { return ModelKind::KNN; }
  int class_count() const noexcept override { return class_count_; }
  /// Neighbour class counts over k; equal distances rank the lower training
  /// index first.
  std::vector<double> predict_proba(std::span<const double> x) const override;
  void save_body(ModelWriter& out) const override;
  static std::shared_ptr<const KnnModel> load(ModelReader& in, int class_count);

  /// Training indices of the k nearest neighbours, nearest first.
  std::vector<std::size_t> neighbors(std::span<const double> x) const;
  const KnnParams& params() const noexcept { return params_; }

 private:
  Matrix x_;
  std::vector<int> y_;
  int class_count_;
  KnnParams params_;
};

/// Stores the training set. Throws InvalidArgument if k > n or k < 1.
std::shared_ptr<const KnnModel> knn_train(const Matrix& x, std::span<const int> y,
                                          const KnnParams& params, int class_count = 0);

}  // namespace acbench::learn
