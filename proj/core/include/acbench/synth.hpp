#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "acbench/dataset.hpp"
#include "acbench/signal.hpp"

namespace acbench::synth {

enum class FaultClass : int {
  Normal = 0,
  EarlyFault = 1,
  ModerateFault = 2,
  SevereFault = 3,
  CriticalFault = 4,
};

inline constexpr int kFaultClassCount = 5;
inline constexpr std::array<FaultClass, kFaultClassCount> kFaultClasses{
    FaultClass::Normal, FaultClass::EarlyFault, FaultClass::ModerateFault,
    FaultClass::SevereFault, FaultClass::CriticalFault};

std::string_view to_string(FaultClass c);

/// Signal model: shaft tone with decaying harmonics, a periodic train of
/// exponentially decaying resonance bursts whose amplitude grows with
/// severity, and a Gaussian noise floor.
struct GeneratorConfig {
  int samples_per_class = 200;
  double duration_s = 1.0;
  double sample_rate_hz = 16000.0;
  std::uint64_t base_seed = 0;

  double shaft_hz = 60.0;
  int harmonics = 5;
  /// Amplitude of the fundamental; harmonic h has amplitude tone/h, each
  /// jittered by up to 10% per sample.
  double tone_amplitude = 0.2;
  /// Relative random jitter of the shaft frequency per sample.
  double shaft_jitter = 0.02;

  std::array<double, kFaultClassCount> impulse_rate_hz{107.0, 107.0, 107.0, 107.0, 107.0};
  /// Burst peak amplitude per severity; must be strictly increasing.
  std::array<double, kFaultClassCount> impulse_amplitude{0.0, 0.04, 0.12, 0.24, 0.4};
  double resonance_hz = 4000.0;
  double resonance_decay_s = 0.0005;
  /// Per-burst amplitude jitter (relative, uniform).
  double impulse_jitter = 0.2;

  /// Noise floor level relative to the fundamental's RMS, in dB.
  double noise_floor_db = -40.0;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
  std::size_t sample_count() const noexcept { return static_cast<std::size_t>(duration_s * sample_rate_hz); }
};

/// The additive parts of one generated signal.
struct SignalComponents {
  std::vector<double> harmonic;
  std::vector<double> impulses;
  std::vector<double> noise;
};

/// Each component uses its own seeded stream, so two classes generated with
/// the same seed share the harmonic and noise parts exactly.
SignalComponents generate_components(FaultClass cls, std::uint64_t seed, const GeneratorConfig& cfg);

/// Sum of the components; bit-identical for identical (cls, seed, cfg).
signal::AudioSignal generate_sample(FaultClass cls, std::uint64_t seed, const GeneratorConfig& cfg);

/// Seed of sample `index` of class `cls`: base_seed + cls*samples_per_class + index.
std::uint64_t sample_seed(const GeneratorConfig& cfg, int cls, int index);

struct SyntheticCorpus {
  std::vector<signal::AudioSignal> signals;
  /// Labels, seeds and sources; features are left empty.
  Dataset dataset;
};

/// samples_per_class signals per class, class-major order.
SyntheticCorpus generate_dataset(const GeneratorConfig& cfg, unsigned threads = 1);

/// White Gaussian noise scaled so that 10 log10(P_signal / P_noise) equals
/// snr_db for the realised noise. +infinity returns the input unchanged.
/// Throws DegenerateInput for a zero-power signal.
signal::AudioSignal add_noise_at_snr(const signal::AudioSignal& x, double snr_db, std::uint64_t seed);

/// Mean F1 over the evaluated conditions (clean included).
double robustness_index(std::span<const double> f1_by_condition);

}  // namespace acbench::synth
