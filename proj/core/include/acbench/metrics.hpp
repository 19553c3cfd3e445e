#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "acbench/matrix.hpp"

namespace acbench::eval {

/// Counts with rows = true class, columns = predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes);
  ConfusionMatrix(std::span<const int> truth, std::span<const int> predicted, int classes);

  int classes() const noexcept { return classes_; }
  std::int64_t operator()(int truth, int predicted) const;
  void add(int truth, int predicted, std::int64_t count = 1);
  std::int64_t total() const noexcept { return total_; }
  std::int64_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  int classes_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  /// Macro averages over classes; a class with a zero denominator contributes 0.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Throws InvalidArgument for an empty matrix.
ClassificationMetrics classification_metrics(const ConfusionMatrix& cm);

/// One entry per class; 0 wherever the denominator is 0.
struct PerClassScores {
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
};

PerClassScores per_class_scores(const ConfusionMatrix& cm);
std::vector<double> per_class_f1(const ConfusionMatrix& cm);

/// (TP*TN - FP*FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN)); 0 if the denominator is 0.
double mcc_binary(double tp, double tn, double fp, double fn);

/// Generalized (covariance) MCC; for two classes it equals mcc_binary with
/// class 1 as the positive class. Zero denominator gives 0.
double mcc(const ConfusionMatrix& cm);

struct AucResult {
  /// Macro average over the evaluated classes.
  double auc = 0.0;
  std::vector<double> per_class;
  /// Classes lacking positives or negatives; excluded from the average.
  std::vector<int> skipped;
};

/// Area under the ROC curve of one score vector for binary labels, by a
/// threshold sweep with trapezoids. `positive` holds 1 for positives. Tied scores form one ROC step.
double binary_auc(std::span<const double> scores, std::span<const std::uint8_t> positive);

/// One-vs-rest AUC averaged over classes. `scores` has one column per class.
/// Throws InvalidArgument if no class can be evaluated.
AucResult auc_roc(const Matrix& scores, std::span<const int> truth);

}  // namespace acbench::eval
