#pragma once

#include <functional>
#include <string>
#include <vector>

#include "acbench/config.hpp"
#include "acbench/csv.hpp"
#include "acbench/learners.hpp"
#include "acbench/metrics.hpp"
#include "acbench/stats.hpp"

namespace acbench::bench {

/// Progress messages; the default sink discards them.
using Logger = std::function<void(const std::string&)>;

struct EvalScores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  /// NaN when no class could be evaluated.
  double auc = 0.0;
};

/// Scores for predictions and probability rows on one evaluation set.
EvalScores score(std::span<const int> truth, std::span<const int> predicted, const Matrix& proba,
                 int class_count, std::vector<int>* auc_skipped = nullptr);

struct FoldScore {
  std::string dataset;
  int fold = 0;
  std::string model;
  EvalScores scores;
};

/// One evaluated sample with every model's prediction, in roster order.
struct PredictionRow {
  std::string dataset;
  /// "cv", "validation" or "holdout".
  std::string split;
  /// CV fold, or -1 outside CV.
  int fold = -1;
  std::string sample_id;
  int label = 0;
  std::vector<int> predicted;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Sample mean and standard deviation (n - 1).
MeanStd mean_std(std::span<const double> values);

struct ModelSummary {
  std::string name;
  learn::ModelKind kind = learn::ModelKind::KNN;
  /// Over every CV fold of every dataset.
  MeanStd accuracy, precision, recall, f1, mcc, auc;
  /// Final fit on the CV pool, pooled over datasets.
  EvalScores validation;
  EvalScores holdout;
  learn::TimingResult timing;
};

struct NoiseRow {
  std::string model;
  double clean = 0.0;
  std::vector<double> by_level;
  double robustness_index = 0.0;
};

struct NoiseTable {
  std::vector<double> levels_db;
  std::vector<NoiseRow> rows;
};

struct SignificanceReport {
  std::vector<std::string> models;
  /// Pairwise McNemar on holdout predictions; diagonal p = 1.
  std::vector<std::vector<eval::McNemarResult>> mcnemar;
  eval::FriedmanResult friedman;
  /// Which score matrix fed the Friedman test.
  std::string friedman_input;
  std::optional<double> nemenyi_cd;
};

struct DatasetInfo {
  std::string name;
  std::string provenance;
  std::size_t samples = 0;
  int class_count = 0;
  std::size_t cv_pool = 0;
  std::size_t validation = 0;
  std::size_t holdout = 0;
};

struct ImportanceEntry {
  std::size_t feature = 0;
  double importance = 0.0;
};

struct ExperimentResult {
  std::vector<std::string> models;
  std::vector<DatasetInfo> datasets;
  std::vector<FoldScore> folds;
  std::vector<PredictionRow> predictions;
  std::vector<ModelSummary> summaries;
  /// Holdout confusion matrices per model, pooled over datasets.
  std::vector<eval::ConfusionMatrix> confusion;
  NoiseTable noise;
  SignificanceReport significance;
  /// Name of the forest whose importances are reported; empty if none.
  std::string importance_model;
  /// Per registry feature, averaged over datasets and renormalized.
  std::vector<double> importance;
  std::vector<std::string> warnings;
};

/// Full pipeline: data, preprocessing, features, stratified CV, final fit on
/// the CV pool, validation and holdout scoring, noise sweep, significance
/// tests and timing. Errors surface as StageError naming the stage.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Logger& log = {});

/// Trains on the CV pool only and re-evaluates on noise-injected holdout
/// signals at each level (dB; +inf reproduces the clean column).
NoiseTable run_noise_sweep(const ExperimentConfig& cfg, std::span<const double> levels_db,
                           const Logger& log = {});

/// Significance tests from a predictions CSV written by write_report.
SignificanceReport stats_from_predictions(const CsvTable& predictions, std::optional<double> nemenyi_q_alpha = {});

/// Writes every CSV table and the manifest into `dir`.
void write_report(const ExperimentResult& result, const ExperimentConfig& cfg, const std::filesystem::path& dir);

void write_noise_table(std::ostream& out, const NoiseTable& table);
void write_significance(const SignificanceReport& report, const std::filesystem::path& dir);

}  // namespace acbench::bench
