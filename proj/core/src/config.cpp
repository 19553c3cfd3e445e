#include "acbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "acbench/error.hpp"
#include "acbench/random.hpp"

namespace acbench::bench {

using nlohmann::json;

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical); }

const ModelEntry* ExperimentConfig::find_model(std::string_view name) const {
  for (const auto& m : models) {
    if (m.spec.display_name() == name) return &m;
  }
  return nullptr;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidArgument(where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(where, "unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

template <class T, std::size_t N>
void read_array(const json& obj, const char* key, std::array<T, N>& out, const std::string& where) {
  std::vector<T> v;
  read(obj, key, v, where);
  if (!obj.contains(key)) return;
  if (v.size() != N) fail(where + "." + key, "expected " + std::to_string(N) + " values");
  std::copy(v.begin(), v.end(), out.begin());
}

void parse_generator(const json& j, synth::GeneratorConfig& g, const std::string& where) {
  check_keys(j, where,
             {"samples_per_class", "duration_s", "sample_rate_hz", "base_seed", "shaft_hz", "harmonics",
              "tone_amplitude", "shaft_jitter", "impulse_rate_hz", "impulse_amplitude", "resonance_hz",
              "resonance_decay_s", "impulse_jitter", "noise_floor_db"});
  read(j, "samples_per_class", g.samples_per_class, where);
  read(j, "duration_s", g.duration_s, where);
  read(j, "sample_rate_hz", g.sample_rate_hz, where);
  read(j, "base_seed", g.base_seed, where);
  read(j, "shaft_hz", g.shaft_hz, where);
  read(j, "harmonics", g.harmonics, where);
  read(j, "tone_amplitude", g.tone_amplitude, where);
  read(j, "shaft_jitter", g.shaft_jitter, where);
  read_array(j, "impulse_rate_hz", g.impulse_rate_hz, where);
  read_array(j, "impulse_amplitude", g.impulse_amplitude, where);
  read(j, "resonance_hz", g.resonance_hz, where);
  read(j, "resonance_decay_s", g.resonance_decay_s, where);
  read(j, "impulse_jitter", g.impulse_jitter, where);
  read(j, "noise_floor_db", g.noise_floor_db, where);
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    fail(where, e.what());
  }
}

template <class E, class F>
void read_enum(const json& obj, const char* key, E& out, F parse, const std::string& where) {
  std::string text;
  read(obj, key, text, where);
  if (!obj.contains(key)) return;
  try {
    out = parse(text);
  } catch (const InvalidArgument& e) {
    fail(where + "." + key, e.what());
  }
}

void parse_params(const json& p, learn::ModelSpec& s, const std::string& where) {
  using learn::ModelKind;
  switch (s.kind) {
    case ModelKind::KNN:
      check_keys(p, where, {"k", "metric"});
      read(p, "k", s.knn.k, where);
      read_enum(p, "metric", s.knn.metric, learn::parse_distance, where);
      break;
    case ModelKind::SVM:
      check_keys(p, where, {"kernel", "C", "gamma", "coef0", "degree", "tol", "max_passes"});
      read_enum(p, "kernel", s.svm.kernel, learn::parse_kernel, where);
      read(p, "C", s.svm.C, where);
      read(p, "gamma", s.svm.gamma, where);
      read(p, "coef0", s.svm.coef0, where);
      read(p, "degree", s.svm.degree, where);
      read(p, "tol", s.svm.tol, where);
      read(p, "max_passes", s.svm.max_passes, where);
      break;
    case ModelKind::RF:
      check_keys(p, where, {"n_trees", "max_depth", "min_samples_split", "min_samples_leaf", "mtry", "bootstrap"});
      read(p, "n_trees", s.rf.n_trees, where);
      read(p, "max_depth", s.rf.max_depth, where);
      read(p, "min_samples_split", s.rf.min_samples_split, where);
      read(p, "min_samples_leaf", s.rf.min_samples_leaf, where);
      read(p, "mtry", s.rf.mtry, where);
      read(p, "bootstrap", s.rf.bootstrap, where);
      break;
    case ModelKind::GBT:
      check_keys(p, where, {"n_rounds", "learning_rate", "max_depth", "gamma", "lambda", "min_child_weight"});
      read(p, "n_rounds", s.gbt.n_rounds, where);
      read(p, "learning_rate", s.gbt.learning_rate, where);
      read(p, "max_depth", s.gbt.max_depth, where);
      read(p, "gamma", s.gbt.gamma, where);
      read(p, "lambda", s.gbt.lambda, where);
      read(p, "min_child_weight", s.gbt.min_child_weight, where);
      break;
    case ModelKind::MLP: {
      check_keys(p, where, {"hidden", "activation", "epochs", "learning_rate", "momentum", "batch_size", "l2"});
      std::vector<int> hidden{s.mlp.hidden1, s.mlp.hidden2};
      read(p, "hidden", hidden, where);
      if (hidden.size() != 2) fail(where + ".hidden", "expected two layer sizes");
      s.mlp.hidden1 = hidden[0];
      s.mlp.hidden2 = hidden[1];
      read_enum(p, "activation", s.mlp.activation, learn::parse_activation, where);
      read(p, "epochs", s.mlp.epochs, where);
      read(p, "learning_rate", s.mlp.learning_rate, where);
      read(p, "momentum", s.mlp.momentum, where);
      read(p, "batch_size", s.mlp.batch_size, where);
      read(p, "l2", s.mlp.l2, where);
      break;
    }
    case ModelKind::Ensemble:
      check_keys(p, where, {});
      break;
  }
}

json canonical_json(const json& root) {
  json c = root;
  c.erase("output_dir");
  c.erase("threads");
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, origin,
             {"seed", "output_dir", "threads", "datasets", "preprocessing", "cv", "noise_levels_db",
              "timing_repetitions", "nemenyi_q_alpha", "models"});
  if (overrides.seed) root["seed"] = *overrides.seed;
  if (overrides.output_dir) root["output_dir"] = overrides.output_dir->generic_string();
  if (overrides.threads) root["threads"] = *overrides.threads;

  ExperimentConfig cfg;
  if (!root.contains("seed")) fail(origin, "'seed' is mandatory");
  read(root, "seed", cfg.seed, origin);
  std::string out_dir = cfg.output_dir.generic_string();
  read(root, "output_dir", out_dir, origin);
  cfg.output_dir = out_dir;
  read(root, "threads", cfg.threads, origin);

  if (!root.contains("datasets") || !root["datasets"].is_array() || root["datasets"].empty()) {
    fail(origin, "'datasets' must be a non-empty array");
  }
  std::set<std::string> dataset_names;
  for (std::size_t i = 0; i < root["datasets"].size(); ++i) {
    const json& d = root["datasets"][i];
    const std::string where = origin + ".datasets[" + std::to_string(i) + "]";
    check_keys(d, where, {"name", "type", "generator", "dir", "labels", "permissive"});
    DatasetSource src;
    std::string type = "synthetic";
    read(d, "type", type, where);
    read(d, "name", src.name, where);
    if (src.name.empty()) src.name = type + std::to_string(i);
    if (!dataset_names.insert(src.name).second) fail(where, "duplicate dataset name '" + src.name + "'");
    if (type == "synthetic") {
      src.type = DatasetSource::Type::Synthetic;
      src.generator.base_seed = derive_seed(cfg.seed, fnv1a64(src.name));
      if (d.contains("generator")) parse_generator(d["generator"], src.generator, where + ".generator");
      if (d.contains("dir") || d.contains("labels")) fail(where, "'dir'/'labels' only apply to wav datasets");
    } else if (type == "wav") {
      src.type = DatasetSource::Type::Wav;
      std::string dir, labels;
      read(d, "dir", dir, where);
      read(d, "labels", labels, where);
      if (dir.empty() || labels.empty()) fail(where, "wav datasets need 'dir' and 'labels'");
      src.dir = dir;
      src.labels = labels;
      read(d, "permissive", src.permissive, where);
      if (d.contains("generator")) fail(where, "'generator' only applies to synthetic datasets");
    } else {
      fail(where + ".type", "expected 'synthetic' or 'wav'");
    }
    cfg.datasets.push_back(std::move(src));
  }

  if (root.contains("preprocessing")) {
    const json& p = root["preprocessing"];
    const std::string where = origin + ".preprocessing";
    check_keys(p, where, {"spectral_subtraction", "alpha", "beta", "window_size", "hop", "noise_seconds", "normalization"});
    auto& pp = cfg.preprocessing;
    read(p, "spectral_subtraction", pp.spectral_subtraction, where);
    read(p, "alpha", pp.subtraction.alpha, where);
    read(p, "beta", pp.subtraction.beta, where);
    read(p, "window_size", pp.subtraction.window_size, where);
    read(p, "hop", pp.subtraction.hop, where);
    read(p, "noise_seconds", pp.noise_seconds, where);
    read_enum(p, "normalization", pp.normalization, parse_normalization, where);
    if (pp.subtraction.alpha < 1.0 || pp.subtraction.alpha > 3.0) fail(where + ".alpha", "must lie in [1, 3]");
    if (pp.subtraction.beta < 0.0) fail(where + ".beta", "must be >= 0");
    if (!(pp.noise_seconds > 0.0)) fail(where + ".noise_seconds", "must be positive");
  }

  if (root.contains("cv")) {
    const json& c = root["cv"];
    const std::string where = origin + ".cv";
    check_keys(c, where, {"folds", "holdout", "validation"});
    read(c, "folds", cfg.cv.folds, where);
    read(c, "holdout", cfg.cv.holdout, where);
    read(c, "validation", cfg.cv.validation, where);
    if (cfg.cv.folds < 2) fail(where + ".folds", "must be >= 2");
    if (cfg.cv.holdout <= 0.0 || cfg.cv.validation < 0.0 || cfg.cv.holdout + cfg.cv.validation >= 1.0) {
      fail(where, "holdout must be positive and holdout + validation below 1");
    }
  }

  read(root, "noise_levels_db", cfg.noise_levels_db, origin);
  for (std::size_t i = 1; i < cfg.noise_levels_db.size(); ++i) {
    if (!(cfg.noise_levels_db[i] < cfg.noise_levels_db[i - 1])) {
      fail(origin + ".noise_levels_db", "levels must be strictly decreasing");
    }
  }
  read(root, "timing_repetitions", cfg.timing_repetitions, origin);
  if (cfg.timing_repetitions < 3) fail(origin + ".timing_repetitions", "must be >= 3");
  if (root.contains("nemenyi_q_alpha") && !root["nemenyi_q_alpha"].is_null()) {
    double q = 0.0;
    read(root, "nemenyi_q_alpha", q, origin);
    if (!(q > 0.0)) fail(origin + ".nemenyi_q_alpha", "must be positive");
    cfg.nemenyi_q_alpha = q;
  }

  if (!root.contains("models") || !root["models"].is_array() || root["models"].empty()) {
    fail(origin, "'models' must list at least one model");
  }
  for (std::size_t i = 0; i < root["models"].size(); ++i) {
    const json& m = root["models"][i];
    const std::string where = origin + ".models[" + std::to_string(i) + "]";
    check_keys(m, where, {"name", "kind", "params", "members", "weights"});
    std::string kind;
    read(m, "kind", kind, where);
    ModelEntry entry;
    try {
      entry.spec.kind = learn::parse_model_kind(kind);
    } catch (const InvalidArgument& e) {
      fail(where + ".kind", e.what());
    }
    read(m, "name", entry.spec.name, where);
    entry.spec.name = entry.spec.display_name();
    if (cfg.find_model(entry.spec.name)) fail(where, "duplicate model name '" + entry.spec.name + "'");
    entry.spec.seed = derive_seed(cfg.seed, fnv1a64(entry.spec.name));
    if (m.contains("params")) parse_params(m["params"], entry.spec, where + ".params");

    if (entry.spec.kind == learn::ModelKind::Ensemble) {
      read(m, "members", entry.member_names, where);
      read(m, "weights", entry.spec.weights, where);
      if (entry.member_names.empty()) entry.member_names = {"svm", "rf", "gbt"};
      for (const auto& name : entry.member_names) {
        const ModelEntry* member = cfg.find_model(name);
        if (!member) fail(where + ".members", "'" + name + "' must name a model listed before the ensemble");
        if (member->spec.kind == learn::ModelKind::Ensemble) fail(where + ".members", "ensembles cannot nest");
        entry.spec.members.push_back(member->spec);
      }
    } else if (m.contains("members") || m.contains("weights")) {
      fail(where, "'members'/'weights' only apply to ensembles");
    }
    try {
      entry.spec.validate();
    } catch (const InvalidArgument& e) {
      fail(where, e.what());
    }
    cfg.models.push_back(std::move(entry));
  }

  cfg.canonical = canonical_json(root).dump();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(path.string() + ": cannot open config");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides, path.filename().string());
}

std::string default_config_json() {
  return R"({
  "seed": 20240601,
  "output_dir": "acbench-out",
  "threads": 1,
  "datasets": [
    {"name": "synthetic", "type": "synthetic",
     "generator": {"samples_per_class": 200, "duration_s": 1.0, "sample_rate_hz": 16000}}
  ],
  "preprocessing": {"spectral_subtraction": false, "normalization": "none"},
  "cv": {"folds": 5, "holdout": 0.2, "validation": 0.1},
  "noise_levels_db": [40, 30, 20, 10],
  "timing_repetitions": 3,
  "models": [
    {"name": "svm", "kind": "svm", "params": {"kernel": "rbf", "C": 10}},
    {"name": "knn", "kind": "knn", "params": {"k": 7, "metric": "euclidean"}},
    {"name": "rf", "kind": "rf", "params": {"n_trees": 100}},
    {"name": "gbt", "kind": "gbt", "params": {"n_rounds": 100, "learning_rate": 0.1, "max_depth": 3}},
    {"name": "mlp", "kind": "mlp", "params": {"hidden": [64, 32], "activation": "relu", "epochs": 100}},
    {"name": "ensemble", "kind": "ensemble", "members": ["svm", "rf", "gbt"]}
  ]
}
)";
}

}  // namespace acbench::bench
