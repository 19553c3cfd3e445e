#include "acbench/synth.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "acbench/error.hpp"
#include "acbench/random.hpp"

namespace acbench::synth {
namespace {

enum Stream : std::uint64_t { kHarmonicStream = 1, kImpulseStream = 2, kNoiseStream = 3 };

}  // namespace

std::string_view to_string(FaultClass c) {
  switch (c) {
    case FaultClass::Normal:
      return "Normal";
    case FaultClass::EarlyFault:
      return "Early Fault";
    case FaultClass::ModerateFault:
      return "Moderate Fault";
    case FaultClass::SevereFault:
      return "Severe Fault";
    case FaultClass::CriticalFault:
      return "Critical Fault";
  }
  return "?";
}

void GeneratorConfig::validate() const {
  if (samples_per_class < 1) throw InvalidArgument("generator: samples_per_class must be >= 1");
  if (!(duration_s > 0.0)) throw InvalidArgument("generator: duration_s must be positive");
  if (!(sample_rate_hz > 0.0)) throw InvalidArgument("generator: sample_rate_hz must be positive");
  if (sample_count() < 1) throw InvalidArgument("generator: duration shorter than one sample");
  if (harmonics < 1) throw InvalidArgument("generator: need at least one harmonic");
  if (!(shaft_hz > 0.0) || !(tone_amplitude >= 0.0)) {
    throw InvalidArgument("generator: shaft frequency must be positive and tone amplitude non-negative");
  }
  if (impulse_amplitude[0] < 0.0) throw InvalidArgument("generator: impulse amplitudes must be >= 0");
  for (int c = 1; c < kFaultClassCount; ++c) {
    if (!(impulse_amplitude[c] > impulse_amplitude[c - 1])) {
      throw InvalidArgument("generator: impulse amplitude must increase strictly with severity");
    }
  }
  for (double r : impulse_rate_hz) {
    if (!(r > 0.0)) throw InvalidArgument("generator: impulse rates must be positive");
  }
  if (!(resonance_hz > 0.0) || !(resonance_decay_s > 0.0)) {
    throw InvalidArgument("generator: resonance frequency and decay must be positive");
  }
  if (shaft_jitter < 0.0 || impulse_jitter < 0.0 || impulse_jitter >= 1.0) {
    throw InvalidArgument("generator: jitter out of range");
  }
}

SignalComponents generate_components(FaultClass cls, std::uint64_t seed, const GeneratorConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.sample_count();
  const double fs = cfg.sample_rate_hz;
  const auto c = static_cast<std::size_t>(cls);
  SignalComponents out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                       std::vector<double>(n, 0.0)};

  {
    Rng rng = make_rng(derive_seed(seed, kHarmonicStream));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double f0 = cfg.shaft_hz * (1.0 + cfg.shaft_jitter * unit(rng));
    for (int h = 1; h <= cfg.harmonics; ++h) {
      const double f = f0 * h;
      if (f >= fs / 2.0) break;
      const double amp = cfg.tone_amplitude / h * (1.0 + 0.1 * unit(rng));
      const double ph = phase(rng);
      for (std::size_t i = 0; i < n; ++i) {
        out.harmonic[i] += amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs + ph);
      }
    }
  }

  const double amplitude = cfg.impulse_amplitude[c];
  if (amplitude > 0.0) {
    Rng rng = make_rng(derive_seed(seed, kImpulseStream));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double period = 1.0 / cfg.impulse_rate_hz[c];
    const double resonance = std::min(cfg.resonance_hz, 0.45 * fs);
    const auto burst_len = static_cast<std::size_t>(std::ceil(6.0 * cfg.resonance_decay_s * fs));
    double t = unit(rng) * period;
    const double duration = static_cast<double>(n) / fs;
    while (t < duration) {
      const double amp = amplitude * (1.0 + cfg.impulse_jitter * (2.0 * unit(rng) - 1.0));
      const auto start = static_cast<std::size_t>(std::ceil(t * fs));
      for (std::size_t j = 0; j < burst_len && start + j < n; ++j) {
        const double tau = (static_cast<double>(start + j) / fs) - t;
        out.impulses[start + j] += amp * std::exp(-tau / cfg.resonance_decay_s) *
                                   std::sin(2.0 * std::numbers::pi * resonance * tau);
      }
      // Slip of up to 2% of the period, as in rolling-element defects.
      t += period * (1.0 + 0.02 * (2.0 * unit(rng) - 1.0));
    }
  }

  {
    Rng rng = make_rng(derive_seed(seed, kNoiseStream));
    const double fundamental_rms = cfg.tone_amplitude / std::numbers::sqrt2;
    const double sigma = fundamental_rms * std::pow(10.0, cfg.noise_floor_db / 20.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& v : out.noise) v = sigma * gauss(rng);
  }
  return out;
}

signal::AudioSignal generate_sample(FaultClass cls, std::uint64_t seed, const GeneratorConfig& cfg) {
  auto parts = generate_components(cls, seed, cfg);
  std::vector<double> x(parts.harmonic.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = parts.harmonic[i] + parts.impulses[i] + parts.noise[i];
  return signal::AudioSignal(std::move(x), cfg.sample_rate_hz);
}

std::uint64_t sample_seed(const GeneratorConfig& cfg, int cls, int index) {
  return cfg.base_seed + static_cast<std::uint64_t>(cls) * static_cast<std::uint64_t>(cfg.samples_per_class) +
         static_cast<std::uint64_t>(index);
}

SyntheticCorpus generate_dataset(const GeneratorConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::size_t total = static_cast<std::size_t>(cfg.samples_per_class) * kFaultClassCount;
  SyntheticCorpus corpus;
  auto& ds = corpus.dataset;
  ds.class_count = kFaultClassCount;
  ds.provenance = "synthetic";
  for (int c = 0; c < kFaultClassCount; ++c) {
    for (int i = 0; i < cfg.samples_per_class; ++i) {
      ds.labels.push_back(c);
      ds.seeds.push_back(sample_seed(cfg, c, i));
      ds.sources.push_back("class" + std::to_string(c) + "_" + std::to_string(i));
    }
  }

  std::vector<std::optional<signal::AudioSignal>> slots(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        slots[i] = generate_sample(static_cast<FaultClass>(ds.labels[i]), ds.seeds[i], cfg);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  corpus.signals.reserve(total);
  for (auto& s : slots) corpus.signals.push_back(std::move(*s));
  return corpus;
}

signal::AudioSignal add_noise_at_snr(const signal::AudioSignal& x, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0.0) return x;
  if (std::isnan(snr_db) || std::isinf(snr_db)) throw InvalidArgument("add_noise_at_snr: invalid SNR");
  const auto s = x.samples();
  double p_signal = 0.0;
  for (double v : s) p_signal += v * v;
  p_signal /= static_cast<double>(s.size());
  if (p_signal <= 0.0) throw DegenerateInput("add_noise_at_snr: signal has zero power");

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(s.size());
  double p_noise = 0.0;
  for (double& v : noise) {
    v = gauss(rng);
    p_noise += v * v;
  }
  p_noise /= static_cast<double>(s.size());
  const double target = p_signal / std::pow(10.0, snr_db / 10.0);
  const double gain = std::sqrt(target / p_noise);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + gain * noise[i];
  return signal::AudioSignal(std::move(out), x.sample_rate_hz());
}

double robustness_index(std::span<const double> f1_by_condition) {
  if (f1_by_condition.empty()) throw InvalidArgument("robustness_index: no conditions");
  return std::accumulate(f1_by_condition.begin(), f1_by_condition.end(), 0.0) /
         static_cast<double>(f1_by_condition.size());
}

}  // namespace acbench::synth
