#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "acbench/classifier.hpp"
#include "acbench/ensemble.hpp"
#include "acbench/forest.hpp"
#include "acbench/gbt.hpp"
#include "acbench/knn.hpp"
#include "acbench/mlp.hpp"
#include "acbench/svm.hpp"

namespace acbench::learn {

/// What to train. Only the parameter block matching `kind` is used;
/// ensembles list their member specs and weights.
struct ModelSpec {
  ModelKind kind = ModelKind::KNN;
  /// Display name; defaults to to_string(kind).
  std::string name;
  std::uint64_t seed = 0;

  KnnParams knn;
  SvmParams svm;
  ForestParams rf;
  GbtParams gbt;
  MlpParams mlp;

  std::vector<ModelSpec> members;
  /// Empty means equal weights.
  std::vector<double> weights;

  std::string display_name() const;
  /// Throws InvalidArgument for out-of-range hyperparameters.
  void validate() const;
};

/// Defaults for one kind. The ensemble default is SVM + RF + GBT, equally weighted.
ModelSpec default_spec(ModelKind kind, std::uint64_t seed = 0);

struct TrainedModel {
  std::shared_ptr<const Classifier> model;
  std::string name;
  double training_seconds = 0.0;
  std::string registry_version;

  ModelKind kind() const { return model->kind(); }
  int class_count() const { return model->class_count(); }
};

/// Fits `spec` on (x, y). The spec seed overrides the seed inside the
/// parameter block. Ensemble members are fitted with their own specs.
TrainedModel train(const ModelSpec& spec, const Matrix& x, std::span<const int> y, int class_count = 0,
                   int threads = 1);

/// Soft-voting ensemble over models that are already fitted.
TrainedModel assemble_ensemble(std::string name, std::vector<TrainedModel> members, std::vector<double> weights);

struct TimingResult {
  /// Medians over the repetitions.
  double training_seconds = 0.0;
  double prediction_ms_per_sample = 0.0;
  /// Coefficient of variation (sd / mean) of the repetitions.
  double training_cv = 0.0;
  double prediction_cv = 0.0;
  int repetitions = 0;
};

/// Trains `spec` on the training set and predicts `queries`, `repetitions`
/// (at least 3) times, reporting wall-clock medians.
TimingResult measure_timing(const ModelSpec& spec, const Matrix& x, std::span<const int> y,
                            const Matrix& queries, int repetitions = 3, int class_count = 0);

/// Median and coefficient of variation of a sample of durations.
struct Spread {
  double median = 0.0;
  double cv = 0.0;
};
Spread spread(std::vector<double> values);

}  // namespace acbench::learn
