#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acbench/matrix.hpp"

namespace acbench::learn {

enum class ModelKind { KNN, SVM, RF, GBT, MLP, Ensemble };

std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view text);

class ModelWriter;
class ModelReader;

/// Uniform predict-proba contract shared by every learner. Fitted models are
/// immutable, so one instance can serve concurrent predictions.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ModelKind kind() const noexcept = 0;
  virtual int class_count() const noexcept = 0;
  /// Probability per class; entries in [0, 1] summing to 1.
  virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;
  /// Writes the kind-specific body (see model_io.hpp for the envelope).
  virtual void save_body(ModelWriter& out) const = 0;

  /// argmax of predict_proba, lowest class index on ties.
  int predict(std::span<const double> x) const;
  Matrix predict_proba(const Matrix& x) const;
  std::vector<int> predict(const Matrix& x) const;
};

/// Index of the largest entry; the first one on ties.
int argmax(std::span<const double> p) noexcept;

/// Infers the class count as max(label) + 1 and validates labels.
int infer_class_count(std::span<const int> y);

/// Shared argument checks for the train functions.
void check_training_data(const Matrix& x, std::span<const int> y, int class_count);

}  // namespace acbench::learn
