#include "acbench/learners.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>

#include "acbench/error.hpp"
#include "acbench/registry.hpp"

namespace acbench::learn {

std::string ModelSpec::display_name() const { return name.empty() ? std::string(to_string(kind)) : name; }

void ModelSpec::validate() const {
  switch (kind) {
    case ModelKind::KNN:
      if (knn.k < 1) throw InvalidArgument("knn: k must be >= 1");
      break;
    case ModelKind::SVM:
      if (!(svm.C > 0.0)) throw InvalidArgument("svm: C must be > 0");
      if (svm.gamma < 0.0) throw InvalidArgument("svm: gamma must be >= 0");
      if (svm.max_passes < 1) throw InvalidArgument("svm: max_passes must be >= 1");
      break;
    case ModelKind::RF:
      if (rf.n_trees < 1) throw InvalidArgument("rf: n_trees must be >= 1");
      if (rf.max_depth < 0) throw InvalidArgument("rf: max_depth must be >= 0");
      break;
    case ModelKind::GBT:
      if (gbt.n_rounds < 1) throw InvalidArgument("gbt: n_rounds must be >= 1");
      if (!(gbt.learning_rate > 0.0 && gbt.learning_rate <= 1.0)) {
        throw InvalidArgument("gbt: learning_rate must lie in (0, 1]");
      }
      if (gbt.gamma < 0.0 || gbt.lambda < 0.0) throw InvalidArgument("gbt: gamma and lambda must be >= 0");
      break;
    case ModelKind::MLP:
      if (mlp.hidden1 < 1 || mlp.hidden2 < 1) throw InvalidArgument("mlp: layer sizes must be >= 1");
      if (!(mlp.learning_rate > 0.0 && mlp.learning_rate <= 1.0)) {
        throw InvalidArgument("mlp: learning_rate must lie in (0, 1]");
      }
      if (mlp.epochs < 1 || mlp.batch_size < 1) throw InvalidArgument("mlp: epochs and batch_size must be >= 1");
      break;
    case ModelKind::Ensemble: {
      if (members.empty()) throw InvalidArgument("ensemble: no members");
      if (!weights.empty() && weights.size() != members.size()) {
        throw InvalidArgument("ensemble: one weight per member required");
      }
      double total = weights.empty() ? 1.0 : 0.0;
      for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("ensemble: weights must be >= 0");
        total += w;
      }
      if (!(total > 0.0)) throw InvalidArgument("ensemble: weights must not all be zero");
      for (const auto& m : members) m.validate();
      break;
    }
  }
}

ModelSpec default_spec(ModelKind kind, std::uint64_t seed) {
  ModelSpec s;
  s.kind = kind;
  s.seed = seed;
  if (kind == ModelKind::Ensemble) {
    for (auto k : {ModelKind::SVM, ModelKind::RF, ModelKind::GBT}) s.members.push_back(default_spec(k, seed));
  }
  return s;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::shared_ptr<const Classifier> fit(const ModelSpec& spec, const Matrix& x, std::span<const int> y,
                                      int class_count, int threads) {
  switch (spec.kind) {
    case ModelKind::KNN:
      return knn_train(x, y, spec.knn, class_count);
    case ModelKind::SVM: {
      auto p = spec.svm;
      p.seed = spec.seed;
      return svm_train(x, y, p, class_count);
    }
    case ModelKind::RF: {
      auto p = spec.rf;
      p.seed = spec.seed;
      p.threads = std::max(p.threads, threads);
      return rf_train(x, y, p, class_count);
    }
    case ModelKind::GBT: {
      auto p = spec.gbt;
      p.seed = spec.seed;
      return gbt_train(x, y, p, class_count);
    }
    case ModelKind::MLP: {
      auto p = spec.mlp;
      p.seed = spec.seed;
      return mlp_train(x, y, p, class_count);
    }
    case ModelKind::Ensemble: {
      std::vector<std::shared_ptr<const Classifier>> members;
      for (const auto& m : spec.members) members.push_back(fit(m, x, y, class_count, threads));
      return std::make_shared<EnsembleModel>(std::move(members), spec.weights);
    }
  }
  throw InvalidArgument("unknown model kind");
}

}  // namespace

TrainedModel train(const ModelSpec& spec, const Matrix& x, std::span<const int> y, int class_count,
                   int threads) {
  spec.validate();
  if (class_count == 0) class_count = infer_class_count(y);
  const auto start = std::chrono::steady_clock::now();
  TrainedModel out;
  out.model = fit(spec, x, y, class_count, threads);
  out.training_seconds = seconds_since(start);
  out.name = spec.display_name();
  out.registry_version = std::string(features::kRegistryVersion);
  return out;
}

TrainedModel assemble_ensemble(std::string name, std::vector<TrainedModel> members, std::vector<double> weights) {
  std::vector<std::shared_ptr<const Classifier>> models;
  TrainedModel out;
  for (auto& m : members) {
    models.push_back(m.model);
    out.training_seconds += m.training_seconds;
  }
  out.model = std::make_shared<EnsembleModel>(std::move(models), std::move(weights));
  out.name = name.empty() ? std::string(to_string(ModelKind::Ensemble)) : std::move(name);
  out.registry_version = std::string(features::kRegistryVersion);
  return out;
}

Spread spread(std::vector<double> values) {
  Spread s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  s.cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  return s;
}

TimingResult measure_timing(const ModelSpec& spec, const Matrix& x, std::span<const int> y,
                            const Matrix& queries, int repetitions, int class_count) {
  if (queries.rows() == 0) throw InvalidArgument("measure_timing: no query rows");
  repetitions = std::max(repetitions, 3);
  std::vector<double> train_s;
  std::vector<double> predict_ms;
  for (int r = 0; r < repetitions; ++r) {
    auto start = std::chrono::steady_clock::now();
    const auto model = train(spec, x, y, class_count).model;
    train_s.push_back(seconds_since(start));

    start = std::chrono::steady_clock::now();
    volatile int sink = 0;
    for (std::size_t q = 0; q < queries.rows(); ++q) sink = sink + model->predict(queries.row(q));
    predict_ms.push_back(seconds_since(start) * 1e3 / static_cast<double>(queries.rows()));
  }
  // steady_clock can report zero for very fast work; clamp to one tick.
  constexpr double tick =
      static_cast<double>(std::chrono::steady_clock::period::num) / std::chrono::steady_clock::period::den;
  for (double& v : train_s) v = std::max(v, tick);
  for (double& v : predict_ms) v = std::max(v, tick * 1e3 / static_cast<double>(queries.rows()));

  TimingResult out;
  const auto ts = spread(train_s);
  const auto ps = spread(predict_ms);
  out.training_seconds = ts.median;
  out.training_cv = ts.cv;
  out.prediction_ms_per_sample = ps.median;
  out.prediction_cv = ps.cv;
  out.repetitions = repetitions;
  return out;
}

}  // namespace acbench::learn
