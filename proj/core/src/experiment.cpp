#include "acbench/experiment.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "acbench/cv.hpp"
#include "acbench/error.hpp"
#include "acbench/features.hpp"
#include "acbench/random.hpp"
#include "acbench/registry.hpp"

namespace acbench::bench {

namespace {

template <class F>
auto in_stage(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void emit(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

struct Prepared {
  DatasetInfo info;
  std::vector<signal::AudioSignal> raw;
  Dataset data;
  eval::CVPlan plan;
};

Prepared prepare(const ExperimentConfig& cfg, const DatasetSource& src, const Logger& log) {
  Prepared p;
  p.info.name = src.name;
  if (src.type == DatasetSource::Type::Synthetic) {
    auto corpus = in_stage("data", [&] { return synth::generate_dataset(src.generator, cfg.threads); });
    emit(log, fmt::format("{}: generated {} signals", src.name, corpus.signals.size()));
    std::vector<signal::AudioSignal> processed = in_stage("preprocess", [&] {
      std::vector<signal::AudioSignal> out;
      out.reserve(corpus.signals.size());
      for (const auto& x : corpus.signals) out.push_back(preprocess(x, cfg.preprocessing));
      return out;
    });
    corpus.dataset.features = in_stage("features", [&] { return features::extract_batch(processed, cfg.threads); });
    corpus.dataset.provenance = fmt::format("synthetic base_seed={}", src.generator.base_seed);
    p.raw = std::move(corpus.signals);
    p.data = std::move(corpus.dataset);
  } else {
    LoadOptions opts;
    opts.permissive = src.permissive;
    opts.threads = cfg.threads;
    opts.preprocessing = cfg.preprocessing;
    auto loaded = in_stage("data", [&] { return load_corpus(src.dir, src.labels, opts); });
    for (const auto& s : loaded.skipped) emit(log, src.name + ": skipped " + s);
    p.raw = std::move(loaded.signals);
    p.data = std::move(loaded.dataset);
  }
  emit(log, fmt::format("{}: extracted {} x {} features", src.name, p.data.features.rows(), p.data.features.cols()));
  p.plan = in_stage("split", [&] {
    return eval::stratified_kfold(p.data.labels, cfg.cv.folds, derive_seed(cfg.seed, fnv1a64("cv:" + src.name)),
                                  {cfg.cv.holdout, cfg.cv.validation});
  });
  p.info.provenance = p.data.provenance;
  p.info.samples = p.data.size();
  p.info.class_count = p.data.class_count;
  p.info.cv_pool = p.plan.pool_indices().size();
  p.info.validation = p.plan.validation_indices().size();
  p.info.holdout = p.plan.holdout_indices().size();
  return p;
}

/// Fits the roster in order; ensembles reuse the fitted members.
std::vector<learn::TrainedModel> fit_roster(const ExperimentConfig& cfg, const Dataset& train) {
  std::vector<learn::TrainedModel> fitted(cfg.models.size());
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    const auto& spec = cfg.models[m].spec;
    if (spec.kind == learn::ModelKind::Ensemble) continue;
    fitted[m] = in_stage("train", [&] {
      try {
        return learn::train(spec, train.features, train.labels, train.class_count, static_cast<int>(cfg.threads));
      } catch (const std::exception& e) {
        throw Error(spec.display_name() + ": " + e.what());
      }
    });
  }
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    const auto& entry = cfg.models[m];
    if (entry.spec.kind != learn::ModelKind::Ensemble) continue;
    std::vector<learn::TrainedModel> members;
    for (const auto& name : entry.member_names) {
      for (std::size_t j = 0; j < cfg.models.size(); ++j) {
        if (cfg.models[j].spec.display_name() == name) members.push_back(fitted[j]);
      }
    }
    fitted[m] = learn::assemble_ensemble(entry.spec.display_name(), std::move(members), entry.spec.weights);
  }
  return fitted;
}

std::vector<int> argmax_rows(const Matrix& proba) {
  std::vector<int> out(proba.rows());
  for (std::size_t r = 0; r < proba.rows(); ++r) out[r] = learn::argmax(proba.row(r));
  return out;
}

/// Pooled truth / predictions / probabilities for one model over datasets.
struct Pool {
  std::vector<int> truth;
  std::vector<int> predicted;
  Matrix proba;
  int classes = 0;

  void add(std::span<const int> y, std::span<const int> pred, const Matrix& p, int class_count) {
    truth.insert(truth.end(), y.begin(), y.end());
    predicted.insert(predicted.end(), pred.begin(), pred.end());
    classes = std::max(classes, class_count);
    for (std::size_t r = 0; r < p.rows(); ++r) rows.emplace_back(p.row(r).begin(), p.row(r).end());
  }

  EvalScores scores(std::vector<int>* skipped) {
    proba = Matrix(rows.size(), static_cast<std::size_t>(classes), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), proba.row(r).begin());
    return score(truth, predicted, proba, classes, skipped);
  }

  std::vector<std::vector<double>> rows;
};

CsvTable predictions_table(const ExperimentResult& r) {
  CsvTable t;
  t.header = {"dataset", "split", "fold", "sample_id", "label"};
  t.header.insert(t.header.end(), r.models.begin(), r.models.end());
  for (const auto& p : r.predictions) {
    std::vector<std::string> row{p.dataset, p.split, std::to_string(p.fold), p.sample_id, std::to_string(p.label)};
    for (int v : p.predicted) row.push_back(std::to_string(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

double macro_f1(std::span<const int> truth, std::span<const int> pred, int classes) {
  return eval::classification_metrics(eval::ConfusionMatrix(truth, pred, classes)).f1;
}

struct FinalFit {
  features::Scaler scaler;
  std::vector<learn::TrainedModel> models;
  Dataset pool;
  Dataset holdout;
  std::vector<std::size_t> holdout_rows;
};

FinalFit fit_final(const ExperimentConfig& cfg, const Prepared& p) {
  FinalFit f;
  f.holdout_rows = p.plan.holdout_indices();
  f.pool = p.data.subset(p.plan.pool_indices());
  f.holdout = p.data.subset(f.holdout_rows);
  f.scaler = features::Scaler::fit(f.pool.features);
  f.pool.features = f.scaler.transform(f.pool.features);
  f.holdout.features = f.scaler.transform(f.holdout.features);
  f.models = fit_roster(cfg, f.pool);
  return f;
}

/// Noisy-holdout predictions per level for every model.
std::vector<std::vector<std::vector<int>>> sweep_predictions(const ExperimentConfig& cfg, const Prepared& p,
                                                             const FinalFit& f, std::span<const double> levels) {
  const auto noise_seed = derive_seed(cfg.seed, fnv1a64("noise:" + p.info.name));
  std::vector<std::vector<std::vector<int>>> out;  // [level][model][sample]
  for (double level : levels) {
    auto noisy = in_stage("noise", [&] {
      std::vector<signal::AudioSignal> xs;
      for (std::size_t r : f.holdout_rows) {
        xs.push_back(preprocess(synth::add_noise_at_snr(p.raw[r], level, derive_seed(noise_seed, r)), cfg.preprocessing));
      }
      return f.scaler.transform(features::extract_batch(xs, cfg.threads));
    });
    std::vector<std::vector<int>> per_model;
    for (const auto& m : f.models) per_model.push_back(argmax_rows(m.model->predict_proba(noisy)));
    out.push_back(std::move(per_model));
  }
  return out;
}

NoiseTable build_noise_table(const ExperimentConfig& cfg, std::span<const double> levels,
                             const std::vector<std::vector<int>>& clean_truth,
                             const std::vector<std::vector<std::vector<int>>>& clean_pred,
                             const std::vector<std::vector<std::vector<std::vector<int>>>>& noisy_pred,
                             const std::vector<int>& class_counts) {
  // clean_pred[dataset][model][sample], noisy_pred[dataset][level][model][sample]
  NoiseTable t;
  t.levels_db.assign(levels.begin(), levels.end());
  const int classes = *std::max_element(class_counts.begin(), class_counts.end());
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    NoiseRow row;
    row.model = cfg.models[m].spec.display_name();
    std::vector<int> truth, pred;
    for (std::size_t d = 0; d < clean_truth.size(); ++d) {
      truth.insert(truth.end(), clean_truth[d].begin(), clean_truth[d].end());
      pred.insert(pred.end(), clean_pred[d][m].begin(), clean_pred[d][m].end());
    }
    row.clean = macro_f1(truth, pred, classes);
    std::vector<double> conditions{row.clean};
    for (std::size_t l = 0; l < levels.size(); ++l) {
      std::vector<int> lp;
      for (std::size_t d = 0; d < clean_truth.size(); ++d) {
        lp.insert(lp.end(), noisy_pred[d][l][m].begin(), noisy_pred[d][l][m].end());
      }
      row.by_level.push_back(macro_f1(truth, lp, classes));
      conditions.push_back(row.by_level.back());
    }
    row.robustness_index = synth::robustness_index(conditions);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

EvalScores score(std::span<const int> truth, std::span<const int> predicted, const Matrix& proba, int class_count,
                 std::vector<int>* auc_skipped) {
  const eval::ConfusionMatrix cm(truth, predicted, class_count);
  const auto m = eval::classification_metrics(cm);
  EvalScores s{m.accuracy, m.precision, m.recall, m.f1, eval::mcc(cm), std::numeric_limits<double>::quiet_NaN()};
  try {
    const auto auc = eval::auc_roc(proba, truth);
    s.auc = auc.auc;
    if (auc_skipped) *auc_skipped = auc.skipped;
  } catch (const InvalidArgument&) {
    if (auc_skipped) {
      auc_skipped->resize(static_cast<std::size_t>(class_count));
      std::iota(auc_skipped->begin(), auc_skipped->end(), 0);
    }
  }
  return s;
}

MeanStd mean_std(std::span<const double> v) {
  MeanStd out;
  if (v.empty()) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Logger& log) {
  if (cfg.models.empty()) throw StageError("config", "no models configured");
  ExperimentResult result;
  for (const auto& m : cfg.models) result.models.push_back(m.spec.display_name());
  const std::size_t n_models = cfg.models.size();

  std::vector<Pool> val_pool(n_models), hold_pool(n_models);
  std::vector<std::vector<int>> hold_truth;
  std::vector<std::vector<std::vector<int>>> hold_pred;
  std::vector<std::vector<std::vector<std::vector<int>>>> noisy_pred;
  std::vector<int> class_counts;
  std::vector<std::vector<learn::TimingResult>> timings(n_models);
  std::vector<std::vector<double>> importances;

  for (const auto& src : cfg.datasets) {
    const Prepared p = prepare(cfg, src, log);
    result.datasets.push_back(p.info);
    class_counts.push_back(p.data.class_count);

    for (int k = 0; k < cfg.cv.folds; ++k) {
      const auto test_rows = p.plan.test_indices(k);
      const auto st = features::standardize(p.data.subset(p.plan.train_indices(k)), p.data.subset(test_rows));
      const auto models = fit_roster(cfg, st.train);
      std::vector<std::vector<int>> preds;
      for (std::size_t m = 0; m < n_models; ++m) {
        const Matrix proba = models[m].model->predict_proba(st.apply_to.features);
        preds.push_back(argmax_rows(proba));
        std::vector<int> skipped;
        const auto s = in_stage("evaluate", [&] {
          return score(st.apply_to.labels, preds.back(), proba, p.data.class_count, &skipped);
        });
        if (!skipped.empty()) {
          result.warnings.push_back(fmt::format("{} fold {} {}: AUC skipped {} class(es) lacking positives or negatives",
                                                src.name, k, result.models[m], skipped.size()));
        }
        result.folds.push_back({src.name, k, result.models[m], s});
      }
      for (std::size_t i = 0; i < test_rows.size(); ++i) {
        PredictionRow row{src.name, "cv", k, p.data.sources[test_rows[i]], p.data.labels[test_rows[i]], {}};
        for (const auto& pr : preds) row.predicted.push_back(pr[i]);
        result.predictions.push_back(std::move(row));
      }
      emit(log, fmt::format("{}: fold {}/{} done", src.name, k + 1, cfg.cv.folds));
    }

    const FinalFit f = fit_final(cfg, p);
    const auto val_rows = p.plan.validation_indices();
    Dataset val = p.data.subset(val_rows);
    if (!val_rows.empty()) val.features = f.scaler.transform(val.features);
    std::vector<std::vector<int>> clean_pred;
    for (std::size_t m = 0; m < n_models; ++m) {
      const auto& model = *f.models[m].model;
      if (!val_rows.empty()) {
        const Matrix proba = model.predict_proba(val.features);
        val_pool[m].add(val.labels, argmax_rows(proba), proba, p.data.class_count);
      }
      const Matrix proba = model.predict_proba(f.holdout.features);
      clean_pred.push_back(argmax_rows(proba));
      hold_pool[m].add(f.holdout.labels, clean_pred.back(), proba, p.data.class_count);
    }
    std::vector<std::vector<int>> val_pred;
    for (const auto& m : f.models) val_pred.push_back(val_rows.empty() ? std::vector<int>{} : m.model->predict(val.features));
    const auto add_rows = [&](const char* split, const std::vector<std::size_t>& rows,
                              const std::vector<std::vector<int>>& preds) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        PredictionRow row{src.name, split, -1, p.data.sources[rows[i]], p.data.labels[rows[i]], {}};
        for (const auto& pr : preds) row.predicted.push_back(pr[i]);
        result.predictions.push_back(std::move(row));
      }
    };
    add_rows("validation", val_rows, val_pred);
    add_rows("holdout", f.holdout_rows, clean_pred);
    hold_truth.push_back(f.holdout.labels);
    hold_pred.push_back(clean_pred);
    emit(log, fmt::format("{}: final models fitted on {} samples", src.name, f.pool.size()));

    noisy_pred.push_back(sweep_predictions(cfg, p, f, cfg.noise_levels_db));
    if (!cfg.noise_levels_db.empty()) emit(log, fmt::format("{}: noise sweep done", src.name));

    for (std::size_t m = 0; m < n_models; ++m) {
      if (result.importance_model.empty() && cfg.models[m].spec.kind == learn::ModelKind::RF) {
        result.importance_model = result.models[m];
      }
      if (result.models[m] == result.importance_model) {
        const auto* forest = dynamic_cast<const learn::ForestModel*>(f.models[m].model.get());
        if (forest) importances.push_back(forest->feature_importance());
      }
      timings[m].push_back(in_stage("timing", [&] {
        return learn::measure_timing(cfg.models[m].spec, f.pool.features, f.pool.labels, f.holdout.features,
                                     cfg.timing_repetitions, p.data.class_count);
      }));
    }
    emit(log, fmt::format("{}: timing done", src.name));
  }

  for (std::size_t m = 0; m < n_models; ++m) {
    ModelSummary s;
    s.name = result.models[m];
    s.kind = cfg.models[m].spec.kind;
    std::vector<double> acc, prec, rec, f1, mcc, auc;
    for (const auto& fs : result.folds) {
      if (fs.model != s.name) continue;
      acc.push_back(fs.scores.accuracy);
      prec.push_back(fs.scores.precision);
      rec.push_back(fs.scores.recall);
      f1.push_back(fs.scores.f1);
      mcc.push_back(fs.scores.mcc);
      if (!std::isnan(fs.scores.auc)) auc.push_back(fs.scores.auc);
    }
    s.accuracy = mean_std(acc);
    s.precision = mean_std(prec);
    s.recall = mean_std(rec);
    s.f1 = mean_std(f1);
    s.mcc = mean_std(mcc);
    s.auc = mean_std(auc);
    if (!val_pool[m].truth.empty()) s.validation = val_pool[m].scores(nullptr);
    s.holdout = hold_pool[m].scores(nullptr);
    for (const auto& t : timings[m]) {
      s.timing.training_seconds += t.training_seconds / static_cast<double>(timings[m].size());
      s.timing.prediction_ms_per_sample += t.prediction_ms_per_sample / static_cast<double>(timings[m].size());
      s.timing.training_cv = std::max(s.timing.training_cv, t.training_cv);
      s.timing.prediction_cv = std::max(s.timing.prediction_cv, t.prediction_cv);
      s.timing.repetitions = t.repetitions;
    }
    result.summaries.push_back(s);
    result.confusion.emplace_back(hold_pool[m].truth, hold_pool[m].predicted, hold_pool[m].classes);
  }

  result.noise = build_noise_table(cfg, cfg.noise_levels_db, hold_truth, hold_pred, noisy_pred, class_counts);
  result.significance =
      in_stage("stats", [&] { return stats_from_predictions(predictions_table(result), cfg.nemenyi_q_alpha); });

  if (!importances.empty()) {
    result.importance.assign(features::kFeatureCount, 0.0);
    for (const auto& imp : importances) {
      for (std::size_t i = 0; i < imp.size() && i < result.importance.size(); ++i) result.importance[i] += imp[i];
    }
    const double total = std::accumulate(result.importance.begin(), result.importance.end(), 0.0);
    for (double& v : result.importance) v /= total;
  }
  return result;
}

NoiseTable run_noise_sweep(const ExperimentConfig& cfg, std::span<const double> levels, const Logger& log) {
  if (cfg.models.empty()) throw StageError("config", "no models configured");
  std::vector<std::vector<int>> truth;
  std::vector<std::vector<std::vector<int>>> clean;
  std::vector<std::vector<std::vector<std::vector<int>>>> noisy;
  std::vector<int> class_counts;
  for (const auto& src : cfg.datasets) {
    const Prepared p = prepare(cfg, src, log);
    const FinalFit f = fit_final(cfg, p);
    std::vector<std::vector<int>> pred;
    for (const auto& m : f.models) pred.push_back(m.model->predict(f.holdout.features));
    truth.push_back(f.holdout.labels);
    clean.push_back(std::move(pred));
    noisy.push_back(sweep_predictions(cfg, p, f, levels));
    class_counts.push_back(p.data.class_count);
    emit(log, fmt::format("{}: noise sweep done", src.name));
  }
  return build_noise_table(cfg, levels, truth, clean, noisy, class_counts);
}

SignificanceReport stats_from_predictions(const CsvTable& table, std::optional<double> nemenyi_q_alpha) {
  const std::size_t first = 5;
  if (table.header.size() <= first || table.header[0] != "dataset" || table.header[1] != "split" ||
      table.header[2] != "fold" || table.header[3] != "sample_id" || table.header[4] != "label") {
    throw FormatError("predictions: expected columns dataset,split,fold,sample_id,label,<models...>");
  }
  SignificanceReport rep;
  rep.models.assign(table.header.begin() + first, table.header.end());
  const std::size_t k = rep.models.size();

  const auto to_int = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw FormatError("");
      return v;
    } catch (const std::exception&) {
      throw FormatError("predictions: '" + s + "' is not an integer");
    }
  };

  // Holdout correctness for McNemar.
  std::vector<std::vector<std::uint8_t>> correct(k);
  // (dataset, fold) -> truth and per-model predictions for Friedman.
  std::map<std::pair<std::string, int>, std::pair<std::vector<int>, std::vector<std::vector<int>>>> blocks;
  std::map<std::string, int> classes;
  for (const auto& row : table.rows) {
    const int label = to_int(row[4]);
    int& c = classes[row[0]];
    c = std::max(c, label + 1);
    std::vector<int> pred(k);
    for (std::size_t m = 0; m < k; ++m) {
      pred[m] = to_int(row[first + m]);
      if (pred[m] < 0 || label < 0) throw FormatError("predictions: negative class id");
      c = std::max(c, pred[m] + 1);
    }
    if (row[1] == "holdout") {
      for (std::size_t m = 0; m < k; ++m) correct[m].push_back(pred[m] == label ? 1 : 0);
    } else if (row[1] == "cv") {
      auto& b = blocks[{row[0], to_int(row[2])}];
      b.first.push_back(label);
      b.second.resize(k);
      for (std::size_t m = 0; m < k; ++m) b.second[m].push_back(pred[m]);
    }
  }

  rep.mcnemar.assign(k, std::vector<eval::McNemarResult>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      rep.mcnemar[a][b] = a == b ? eval::McNemarResult{0, 0, 0.0, 1.0, true} : eval::mcnemar(correct[a], correct[b]);
    }
  }

  if (k >= 2 && blocks.size() >= 2) {
    Matrix perf(blocks.size(), k);
    std::size_t r = 0;
    for (const auto& [key, b] : blocks) {
      for (std::size_t m = 0; m < k; ++m) perf(r, m) = macro_f1(b.first, b.second[m], classes[key.first]);
      ++r;
    }
    rep.friedman = eval::friedman(perf);
    rep.friedman_input = fmt::format(
        "macro-F1 per (dataset, CV fold) block: N={} blocks x k={} models; ranks 1 = best, ties averaged",
        perf.rows(), k);
    if (nemenyi_q_alpha) rep.nemenyi_cd = eval::nemenyi_cd(*nemenyi_q_alpha, k, perf.rows());
  } else {
    rep.friedman_input = "not run: needs at least two models and two CV blocks";
    rep.friedman.avg_ranks.assign(k, std::numeric_limits<double>::quiet_NaN());
  }
  return rep;
}

}  // namespace acbench::bench
