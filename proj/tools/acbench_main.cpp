// acbench: command line front end for the acoustic condition-monitoring benchmark.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "acbench/config.hpp"
#include "acbench/corpus.hpp"
#include "acbench/error.hpp"
#include "acbench/experiment.hpp"
#include "acbench/features.hpp"
#include "acbench/registry.hpp"
#include "acbench/synth.hpp"
#include "acbench/wav.hpp"

namespace fs = std::filesystem;
using namespace acbench;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<unsigned> threads;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config,-c", c.config, "JSON experiment config (default: built-in desk setup)");
  cmd->add_option("--seed", c.seed, "Global seed, overrides the config");
  cmd->add_option("--out,-o", c.out, "Output directory, overrides the config");
  cmd->add_option("--threads,-j", c.threads, "Worker threads for extraction and forests");
  cmd->add_flag("--quiet,-q", c.quiet, "Suppress progress messages");
}

bench::ExperimentConfig resolve(const Common& c) {
  bench::ConfigOverrides o;
  o.seed = c.seed;
  if (!c.out.empty()) o.output_dir = c.out;
  o.threads = c.threads;
  if (c.config.empty()) return bench::parse_config(bench::default_config_json(), o, "<built-in>");
  return bench::load_config(c.config, o);
}

bench::Logger logger(const Common& c) {
  if (c.quiet) return {};
  return [](const std::string& msg) { std::cerr << msg << "\n"; };
}

void cmd_synth(const Common& c) {
  const auto cfg = resolve(c);
  for (const auto& src : cfg.datasets) {
    if (src.type != bench::DatasetSource::Type::Synthetic) continue;
    const fs::path dir = cfg.output_dir / src.name;
    fs::create_directories(dir);
    const auto corpus = synth::generate_dataset(src.generator, cfg.threads);
    std::ofstream labels(dir / "labels.csv");
    write_csv_row(labels, {"file", "label", "class", "seed"});
    std::size_t clipped = 0;
    for (std::size_t i = 0; i < corpus.signals.size(); ++i) {
      const auto& ds = corpus.dataset;
      const std::string file = ds.sources[i] + ".wav";
      clipped += signal::write_wav(dir / file, corpus.signals[i]);
      write_csv_row(labels, {file, std::to_string(ds.labels[i]),
                             std::string(synth::to_string(static_cast<synth::FaultClass>(ds.labels[i]))),
                             std::to_string(ds.seeds[i])});
    }
    if (!c.quiet) {
      std::cerr << fmt::format("{}: wrote {} files to {}{}\n", src.name, corpus.signals.size(), dir.string(),
                               clipped ? fmt::format(" ({} samples clipped)", clipped) : "");
    }
  }
}

void cmd_extract(const Common& c, const std::string& wav_dir, const std::string& labels, bool permissive,
                 const std::string& registry_out) {
  if (!registry_out.empty()) {
    std::ofstream out(registry_out, std::ios::binary);
    if (!out) throw FormatError(registry_out + ": cannot open for writing");
    out << features::registry_csv();
    return;
  }
  auto cfg = resolve(c);
  fs::create_directories(cfg.output_dir);
  const auto write = [&](const std::string& name, const Dataset& ds) {
    const fs::path path = cfg.output_dir / (name + "_features.csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path.string() + ": cannot open for writing");
    features::write_features_csv(out, ds);
    if (!c.quiet) std::cerr << fmt::format("{}: {} rows -> {}\n", name, ds.size(), path.string());
  };
  if (!wav_dir.empty()) {
    bench::LoadOptions opts{permissive, cfg.threads, cfg.preprocessing};
    const auto loaded = bench::load_corpus(wav_dir, labels, opts);
    for (const auto& s : loaded.skipped) std::cerr << "skipped " << s << "\n";
    write(fs::path(wav_dir).filename().string(), loaded.dataset);
    return;
  }
  for (const auto& src : cfg.datasets) {
    if (src.type == bench::DatasetSource::Type::Wav) {
      const auto loaded = bench::load_corpus(src.dir, src.labels, {src.permissive, cfg.threads, cfg.preprocessing});
      write(src.name, loaded.dataset);
      continue;
    }
    auto corpus = synth::generate_dataset(src.generator, cfg.threads);
    std::vector<signal::AudioSignal> processed;
    for (const auto& x : corpus.signals) processed.push_back(bench::preprocess(x, cfg.preprocessing));
    corpus.dataset.features = features::extract_batch(processed, cfg.threads);
    write(src.name, corpus.dataset);
  }
}

void cmd_bench(const Common& c) {
  const auto cfg = resolve(c);
  const auto result = bench::run_experiment(cfg, logger(c));
  bench::write_report(result, cfg, cfg.output_dir);
  std::cout << fmt::format("{:<10} {:>8} {:>8} {:>8} {:>8}\n", "model", "acc", "f1", "auc", "mcc");
  for (const auto& s : result.summaries) {
    std::cout << fmt::format("{:<10} {:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f}\n", s.name, s.accuracy.mean, s.f1.mean,
                             s.auc.mean, s.mcc.mean);
  }
  std::cout << "report written to " << cfg.output_dir.string() << "\n";
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "clean") {
      out.push_back(std::numeric_limits<double>::infinity());
    } else {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InvalidArgument("--levels: '" + item + "' is not a number");
      }
    }
  }
  return out;
}

void cmd_noise(const Common& c, const std::string& levels_text) {
  const auto cfg = resolve(c);
  const auto levels = levels_text.empty() ? cfg.noise_levels_db : parse_levels(levels_text);
  if (levels.empty()) throw InvalidArgument("no noise levels: set noise_levels_db or pass --levels");
  const auto table = bench::run_noise_sweep(cfg, levels, logger(c));
  fs::create_directories(cfg.output_dir);
  std::ofstream out(cfg.output_dir / "table5_noise.csv", std::ios::binary);
  bench::write_noise_table(out, table);
  bench::write_noise_table(std::cout, table);
}

void cmd_stats(const Common& c, const std::string& predictions) {
  const auto cfg = resolve(c);
  const fs::path input = predictions.empty() ? cfg.output_dir / "predictions.csv" : fs::path(predictions);
  const auto report = bench::stats_from_predictions(read_csv(input), cfg.nemenyi_q_alpha);
  bench::write_significance(report, cfg.output_dir);
  std::cout << fmt::format("friedman chi2 = {:.4f}, p = {:.4g} ({})\n", report.friedman.chi2, report.friedman.p,
                           report.friedman_input);
  for (std::size_t m = 0; m < report.models.size(); ++m) {
    std::cout << fmt::format("  {:<10} average rank {:.3f}\n", report.models[m], report.friedman.avg_ranks[m]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic condition-monitoring benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("acbench 0.1.0, features ") + std::string(features::kRegistryVersion));

  Common common;
  auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic corpus as WAV files plus labels.csv");
  add_common(synth_cmd, common);

  std::string wav_dir, labels, registry_out;
  bool permissive = false;
  auto* extract_cmd = app.add_subcommand("extract", "Extract the 127-feature matrix to CSV");
  add_common(extract_cmd, common);
  extract_cmd->add_option("--wav-dir", wav_dir, "Directory of 16-bit mono WAV files");
  extract_cmd->add_option("--labels", labels, "CSV with file,label columns (with --wav-dir)");
  extract_cmd->add_flag("--permissive", permissive, "Skip files listed in the labels CSV that are missing");
  extract_cmd->add_option("--registry", registry_out, "Write the feature registry CSV to this path and exit");

  auto* bench_cmd = app.add_subcommand("bench", "Run the full benchmark and write the report bundle");
  add_common(bench_cmd, common);

  std::string levels;
  auto* noise_cmd = app.add_subcommand("noise", "Noise-robustness sweep on the holdout set");
  add_common(noise_cmd, common);
  noise_cmd->add_option("--levels", levels, "Comma-separated SNRs in dB, e.g. 40,30,20,10 (inf = clean)");

  std::string predictions;
  auto* stats_cmd = app.add_subcommand("stats", "McNemar and Friedman tests from saved predictions");
  add_common(stats_cmd, common);
  stats_cmd->add_option("--predictions", predictions, "predictions.csv from a bench run (default: <out>/predictions.csv)");

  CLI11_PARSE(app, argc, argv);

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    if (chosen == synth_cmd) cmd_synth(common);
    if (chosen == extract_cmd) {
      if (wav_dir.empty() != labels.empty()) throw InvalidArgument("--wav-dir and --labels go together");
      cmd_extract(common, wav_dir, labels, permissive, registry_out);
    }
    if (chosen == bench_cmd) cmd_bench(common);
    if (chosen == noise_cmd) cmd_noise(common, levels);
    if (chosen == stats_cmd) cmd_stats(common, predictions);
  } catch (const StageError& e) {
    std::cerr << "acbench " << name << ": error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "acbench " << name << ": error: [" << name << "] " << e.what() << "\n";
    return 1;
  }
  return 0;
}
