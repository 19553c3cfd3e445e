#include "acbench/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "acbench/csv.hpp"
#include "acbench/error.hpp"
#include "acbench/features.hpp"
#include "acbench/wav.hpp"

namespace acbench::bench {

namespace fs = std::filesystem;

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::None:
      return "none";
    case Normalization::Amplitude:
      return "amplitude";
    case Normalization::Rms:
      return "rms";
  }
  return "?";
}

Normalization parse_normalization(std::string_view text) {
  for (auto n : {Normalization::None, Normalization::Amplitude, Normalization::Rms}) {
    if (to_string(n) == text) return n;
  }
  throw InvalidArgument("unknown normalization '" + std::string(text) + "'");
}

signal::AudioSignal preprocess(const signal::AudioSignal& x, const Preprocessing& p) {
  signal::AudioSignal out = x;
  if (p.spectral_subtraction) {
    const auto noise = signal::estimate_noise_profile(out, p.subtraction, p.noise_seconds);
    out = signal::spectral_subtract(out, noise, p.subtraction);
  }
  switch (p.normalization) {
    case Normalization::None:
      break;
    case Normalization::Amplitude:
      out = signal::normalize_amplitude(out);
      break;
    case Normalization::Rms:
      out = signal::normalize_rms(out);
      break;
  }
  return out;
}

namespace {

bool parse_int(const std::string& text, int& out) {
  const auto* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, out);
  return r.ec == std::errc{} && r.ptr == end;
}

}  // namespace

LoadedCorpus load_corpus(const fs::path& dir, const fs::path& labels_csv, const LoadOptions& options) {
  if (!fs::is_directory(dir)) throw InvalidArgument(dir.string() + ": not a directory");
  if (fs::is_empty(dir)) throw InvalidArgument(dir.string() + ": directory is empty");

  const CsvTable table = read_csv(labels_csv);
  const std::size_t file_col = table.column("file");
  const std::size_t label_col = table.column("label");
  if (table.rows.empty()) throw FormatError(labels_csv.string() + ": no label rows");

  bool numeric = true;
  for (const auto& row : table.rows) {
    int v = 0;
    numeric = numeric && parse_int(row[label_col], v) && v >= 0;
  }
  std::map<std::string, int> ids;
  LoadedCorpus out;
  if (numeric) {
    int hi = 0;
    for (const auto& row : table.rows) {
      int v = 0;
      parse_int(row[label_col], v);
      hi = std::max(hi, v);
    }
    for (int c = 0; c <= hi; ++c) out.class_names.push_back(std::to_string(c));
  } else {
    std::set<std::string> names;
    for (const auto& row : table.rows) names.insert(row[label_col]);
    for (const auto& n : names) {
      ids[n] = static_cast<int>(out.class_names.size());
      out.class_names.push_back(n);
    }
  }

  std::vector<signal::AudioSignal> processed;
  for (const auto& row : table.rows) {
    const fs::path file = dir / row[file_col];
    if (!fs::is_regular_file(file)) {
      if (!options.permissive) throw FormatError(file.string() + ": listed in labels but missing");
      out.skipped.push_back(file.string() + ": missing");
      continue;
    }
    auto x = signal::read_wav(file);
    processed.push_back(preprocess(x, options.preprocessing));
    out.signals.push_back(std::move(x));
    int label = 0;
    if (numeric) {
      parse_int(row[label_col], label);
    } else {
      label = ids.at(row[label_col]);
    }
    out.dataset.labels.push_back(label);
    out.dataset.seeds.push_back(0);
    out.dataset.sources.push_back(row[file_col]);
  }
  if (out.signals.empty()) throw InvalidArgument(labels_csv.string() + ": no readable files");

  out.dataset.features = features::extract_batch(processed, options.threads);
  out.dataset.class_count = static_cast<int>(out.class_names.size());
  out.dataset.provenance = "wav:" + dir.generic_string() + " labels:" + labels_csv.generic_string();
  return out;
}

}  // namespace acbench::bench
