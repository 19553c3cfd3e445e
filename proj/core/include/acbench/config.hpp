#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acbench/corpus.hpp"
#include "acbench/learners.hpp"
#include "acbench/synth.hpp"

namespace acbench::bench {

struct DatasetSource {
  enum class Type { Synthetic, Wav };

  std::string name;
  Type type = Type::Synthetic;
  /// Synthetic only. base_seed is derived from the global seed unless set.
  synth::GeneratorConfig generator;
  /// Wav only.
  std::filesystem::path dir;
  std::filesystem::path labels;
  bool permissive = false;
};

struct CvSettings {
  int folds = 5;
  /// Fractions of the whole dataset.
  double holdout = 0.2;
  double validation = 0.1;
};

struct ModelEntry {
  /// Fully resolved spec; ensemble members are copies of the named entries.
  learn::ModelSpec spec;
  /// Ensemble only: names of the roster entries it combines.
  std::vector<std::string> member_names;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "acbench-out";
  unsigned threads = 1;
  std::vector<DatasetSource> datasets;
  Preprocessing preprocessing;
  CvSettings cv;
  /// Strictly decreasing SNRs in dB.
  std::vector<double> noise_levels_db;
  int timing_repetitions = 3;
  /// Studentized range quantile for the Nemenyi critical difference; the
  /// value must come from a published table, so it has no default.
  std::optional<double> nemenyi_q_alpha;
  std::vector<ModelEntry> models;

  /// Canonical JSON of every setting that affects results (output_dir and
  /// threads excluded).
  std::string canonical;

  /// FNV-1a of `canonical`.
  std::uint64_t hash() const;
  const ModelEntry* find_model(std::string_view name) const;
};

/// Command-line values that take precedence over the file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<unsigned> threads;
};

/// Parses and validates a JSON config. Throws InvalidArgument naming the
/// offending key; unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text, const ConfigOverrides& overrides = {},
                              const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// The desk-scale setup: one synthetic dataset, 5-fold CV, all six models.
std::string default_config_json();

}  // namespace acbench::bench
