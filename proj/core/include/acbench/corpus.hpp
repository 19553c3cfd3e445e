#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "acbench/dataset.hpp"
#include "acbench/signal.hpp"

namespace acbench::bench {

enum class Normalization { None, Amplitude, Rms };

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view text);

struct Preprocessing {
  bool spectral_subtraction = false;
  signal::SpectralSubtraction subtraction;
  /// Leading span used as the noise estimate.
  double noise_seconds = 0.25;
  Normalization normalization = Normalization::None;
};

/// Optional spectral subtraction followed by optional normalization.
signal::AudioSignal preprocess(const signal::AudioSignal& x, const Preprocessing& p);

struct LoadOptions {
  /// Skip rows whose file is missing instead of failing.
  bool permissive = false;
  unsigned threads = 1;
  Preprocessing preprocessing;
};

struct LoadedCorpus {
  /// Raw signals as read from disk, one per dataset row.
  std::vector<signal::AudioSignal> signals;
  /// Features are extracted from the preprocessed signals.
  Dataset dataset;
  /// Label text for each class id.
  std::vector<std::string> class_names;
  /// Rows skipped under the permissive flag, with the reason.
  std::vector<std::string> skipped;
};

/// Reads a labels CSV with columns `file,label` (file relative to `dir`).
/// Labels are integers, or names mapped to ids in sorted order. Every file
/// must be 16-bit PCM mono; anything else raises FormatError naming the file.
LoadedCorpus load_corpus(const std::filesystem::path& dir, const std::filesystem::path& labels_csv,
                         const LoadOptions& options = {});

}  // namespace acbench::bench
