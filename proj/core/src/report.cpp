#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "acbench/error.hpp"
#include "acbench/experiment.hpp"
#include "acbench/registry.hpp"

namespace acbench::bench {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  return out;
}

std::string num(double v) { return std::isnan(v) ? "" : format_fixed(v, 6); }

std::string p_cell(const eval::McNemarResult& r) {
  if (r.p < 0.001) return "<0.001***";
  if (r.p < 0.05) return format_fixed(r.p, 3) + "*";
  return format_fixed(r.p, 3);
}

std::string level_column(double db) {
  return std::isinf(db) ? std::string("snr_inf") : "snr_" + format_exact(db) + "db";
}

void write_table1(const ExperimentResult& r, const fs::path& dir) {
  auto out = open_out(dir / "table1_performance.csv");
  write_csv_row(out, {"model", "accuracy_mean", "accuracy_std", "precision_mean", "precision_std", "recall_mean",
                      "recall_std", "f1_mean", "f1_std", "auc_mean", "auc_std", "mcc_mean", "mcc_std",
                      "validation_f1", "holdout_accuracy", "holdout_f1", "holdout_auc", "holdout_mcc"});
  for (const auto& s : r.summaries) {
    write_csv_row(out, {s.name, num(s.accuracy.mean), num(s.accuracy.std), num(s.precision.mean),
                        num(s.precision.std), num(s.recall.mean), num(s.recall.std), num(s.f1.mean), num(s.f1.std),
                        num(s.auc.mean), num(s.auc.std), num(s.mcc.mean), num(s.mcc.std), num(s.validation.f1),
                        num(s.holdout.accuracy), num(s.holdout.f1), num(s.holdout.auc), num(s.holdout.mcc)});
  }
}

void write_timing(const ExperimentResult& r, const fs::path& dir) {
  auto out = open_out(dir / "timing.csv");
  write_csv_row(out, {"model", "training_time_s", "training_cv", "prediction_time_ms", "prediction_cv", "repetitions"});
  for (const auto& s : r.summaries) {
    write_csv_row(out, {s.name, format_exact(s.timing.training_seconds), format_fixed(s.timing.training_cv, 4),
                        format_exact(s.timing.prediction_ms_per_sample), format_fixed(s.timing.prediction_cv, 4),
                        std::to_string(s.timing.repetitions)});
  }
}

void write_table3(const ExperimentResult& r, const fs::path& dir) {
  if (r.importance.empty()) return;
  const auto reg = features::registry();
  std::vector<std::size_t> order(r.importance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.importance[a] > r.importance[b]; });
  auto out = open_out(dir / "table3_feature_importance.csv");
  write_csv_row(out, {"rank", "feature", "importance", "domain", "description"});
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& info = reg[order[i]];
    write_csv_row(out, {std::to_string(i + 1), std::string(info.name), num(r.importance[order[i]]),
                        std::string(features::to_string(info.domain)), std::string(info.description)});
  }

  std::map<features::Domain, std::pair<double, int>> by_domain;
  for (std::size_t i = 0; i < r.importance.size(); ++i) {
    auto& d = by_domain[reg[i].domain];
    d.first += r.importance[i];
    ++d.second;
  }
  auto dom = open_out(dir / "importance_by_domain.csv");
  write_csv_row(dom, {"domain", "importance", "features"});
  for (const auto& [d, v] : by_domain) {
    write_csv_row(dom, {std::string(features::to_string(d)), num(v.first), std::to_string(v.second)});
  }
}

void write_table4(const ExperimentResult& r, const fs::path& dir) {
  auto out = open_out(dir / "table4_datasets.csv");
  std::vector<std::string> header{"model"};
  for (const auto& d : r.datasets) {
    header.push_back(d.name + "_f1_mean");
    header.push_back(d.name + "_f1_std");
  }
  header.push_back("average");
  write_csv_row(out, header);
  for (const auto& model : r.models) {
    std::vector<std::string> row{model};
    double sum = 0.0;
    for (const auto& d : r.datasets) {
      std::vector<double> f1;
      for (const auto& fs : r.folds) {
        if (fs.model == model && fs.dataset == d.name) f1.push_back(fs.scores.f1);
      }
      const auto ms = mean_std(f1);
      row.push_back(num(ms.mean));
      row.push_back(num(ms.std));
      sum += ms.mean;
    }
    row.push_back(num(sum / static_cast<double>(r.datasets.size())));
    write_csv_row(out, row);
  }
}

void write_folds(const ExperimentResult& r, const fs::path& dir) {
  auto out = open_out(dir / "fold_metrics.csv");
  write_csv_row(out, {"dataset", "fold", "model", "accuracy", "precision", "recall", "f1", "auc", "mcc"});
  for (const auto& f : r.folds) {
    write_csv_row(out, {f.dataset, std::to_string(f.fold), f.model, num(f.scores.accuracy), num(f.scores.precision),
                        num(f.scores.recall), num(f.scores.f1), num(f.scores.auc), num(f.scores.mcc)});
  }
}

void write_confusion(const ExperimentResult& r, const fs::path& dir) {
  auto out = open_out(dir / "confusion_holdout.csv");
  write_csv_row(out, {"model", "true", "predicted", "count"});
  for (std::size_t m = 0; m < r.confusion.size(); ++m) {
    const auto& cm = r.confusion[m];
    for (int t = 0; t < cm.classes(); ++t) {
      for (int p = 0; p < cm.classes(); ++p) {
        write_csv_row(out, {r.models[m], std::to_string(t), std::to_string(p), std::to_string(cm(t, p))});
      }
    }
  }
}

void write_predictions(const ExperimentResult& r, const fs::path& dir) {
  auto out = open_out(dir / "predictions.csv");
  std::vector<std::string> header{"dataset", "split", "fold", "sample_id", "label"};
  header.insert(header.end(), r.models.begin(), r.models.end());
  write_csv_row(out, header);
  for (const auto& p : r.predictions) {
    std::vector<std::string> row{p.dataset, p.split, std::to_string(p.fold), p.sample_id, std::to_string(p.label)};
    for (int v : p.predicted) row.push_back(std::to_string(v));
    write_csv_row(out, row);
  }
}

void write_manifest(const ExperimentResult& r, const ExperimentConfig& cfg, const fs::path& dir) {
  auto out = open_out(dir / "manifest.txt");
  out << "acbench run manifest\n";
  out << "config_hash: " << fmt::format("{:016x}", cfg.hash()) << "\n";
  out << "seed: " << cfg.seed << "\n";
  out << "feature_registry: " << features::kRegistryVersion << " (" << features::kFeatureCount << " features)\n";
  out << "preprocessing: spectral_subtraction=" << (cfg.preprocessing.spectral_subtraction ? "on" : "off")
      << " alpha=" << format_exact(cfg.preprocessing.subtraction.alpha)
      << " beta=" << format_exact(cfg.preprocessing.subtraction.beta)
      << " normalization=" << to_string(cfg.preprocessing.normalization) << "\n";
  out << "split: holdout " << format_exact(cfg.cv.holdout) << " and validation " << format_exact(cfg.cv.validation)
      << " of the total per class, then " << cfg.cv.folds << "-fold stratified CV on the rest\n";
  out << "scaling: z-score fitted on training folds only; final models fitted on the CV pool\n";
  out << "friedman_input: " << r.significance.friedman_input << "\n";
  out << "mcnemar_input: holdout predictions pooled over datasets\n";
  out << "noise_levels_db:";
  for (double l : cfg.noise_levels_db) out << " " << format_exact(l);
  out << "\n";
  out << "robustness_index: mean F1 over the clean condition and every noise level\n";
  if (!r.importance_model.empty()) out << "importance_model: " << r.importance_model << "\n";
  out << "models:";
  for (const auto& m : r.models) out << " " << m;
  out << "\n";
  for (const auto& d : r.datasets) {
    out << "dataset " << d.name << ": " << d.provenance << "; samples=" << d.samples << " classes=" << d.class_count
        << " cv_pool=" << d.cv_pool << " validation=" << d.validation << " holdout=" << d.holdout << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  out << "timing.csv holds wall-clock measurements and is not reproducible byte for byte\n";
}

}  // namespace

void write_noise_table(std::ostream& out, const NoiseTable& t) {
  std::vector<std::string> header{"model", "clean"};
  for (double l : t.levels_db) header.push_back(level_column(l));
  header.push_back("robustness_index");
  write_csv_row(out, header);
  for (const auto& row : t.rows) {
    std::vector<std::string> cells{row.model, num(row.clean)};
    for (double v : row.by_level) cells.push_back(num(v));
    cells.push_back(num(row.robustness_index));
    write_csv_row(out, cells);
  }
}

void write_significance(const SignificanceReport& s, const fs::path& dir) {
  fs::create_directories(dir);
  auto matrix = open_out(dir / "table2_significance.csv");
  std::vector<std::string> header{"model"};
  header.insert(header.end(), s.models.begin(), s.models.end());
  write_csv_row(matrix, header);
  for (std::size_t a = 0; a < s.models.size(); ++a) {
    std::vector<std::string> row{s.models[a]};
    for (std::size_t b = 0; b < s.models.size(); ++b) row.push_back(a == b ? "-" : p_cell(s.mcnemar[a][b]));
    write_csv_row(matrix, row);
  }

  auto pairs = open_out(dir / "mcnemar.csv");
  write_csv_row(pairs, {"model_a", "model_b", "b", "c", "chi2", "p", "degenerate"});
  for (std::size_t a = 0; a < s.models.size(); ++a) {
    for (std::size_t b = a + 1; b < s.models.size(); ++b) {
      const auto& m = s.mcnemar[a][b];
      write_csv_row(pairs, {s.models[a], s.models[b], std::to_string(m.b), std::to_string(m.c), num(m.chi2),
                            format_exact(m.p), m.degenerate ? "1" : "0"});
    }
  }

  auto fr = open_out(dir / "friedman.csv");
  fr << "# " << s.friedman_input << "\n";
  write_csv_row(fr, {"model", "average_rank"});
  for (std::size_t m = 0; m < s.models.size(); ++m) write_csv_row(fr, {s.models[m], num(s.friedman.avg_ranks[m])});
  auto ft = open_out(dir / "friedman_test.csv");
  write_csv_row(ft, {"chi2", "p", "blocks", "models", "nemenyi_cd"});
  write_csv_row(ft, {num(s.friedman.chi2), format_exact(s.friedman.p), std::to_string(s.friedman.n),
                     std::to_string(s.friedman.k), s.nemenyi_cd ? num(*s.nemenyi_cd) : ""});
}

void write_report(const ExperimentResult& r, const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_table1(r, dir);
  write_timing(r, dir);
  write_significance(r.significance, dir);
  write_table3(r, dir);
  write_table4(r, dir);
  {
    auto out = open_out(dir / "table5_noise.csv");
    write_noise_table(out, r.noise);
  }
  write_folds(r, dir);
  write_confusion(r, dir);
  write_predictions(r, dir);
  write_manifest(r, cfg, dir);
}

}  // namespace acbench::bench
