#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "acbench/dataset.hpp"
#include "acbench/dsp.hpp"
#include "acbench/registry.hpp"
#include "acbench/signal.hpp"

namespace acbench::features {

/// Analysis parameters. The defaults depend on the sample rate so that the
/// frame length stays near 32 ms.
struct FeatureConfig {
  std::size_t window_size = 512;
  std::size_t hop = 256;
  std::size_t n_mfcc = 13;
  std::size_t n_mel = 26;
  double rolloff = 0.85;
  std::size_t wavelet_levels = 5;

  static FeatureConfig for_sample_rate(double sample_rate_hz);
};

struct FeatureVector {
  std::vector<double> values;
  std::string registry_version{kRegistryVersion};
};

// Spectral statistics of a one-sided power spectrum with bin k at k*bin_hz.
// All return 0 for an all-zero spectrum.
double spectral_centroid(std::span<const double> power, double bin_hz);
double spectral_bandwidth(std::span<const double> power, double bin_hz);
double spectral_rolloff(std::span<const double> power, double bin_hz, double fraction = 0.85);
double spectral_flatness(std::span<const double> power);
double spectral_entropy(std::span<const double> power);
double spectral_skewness(std::span<const double> power, double bin_hz);
double spectral_kurtosis(std::span<const double> power, double bin_hz);
double dominant_frequency(std::span<const double> power, double bin_hz);
/// Mean over six octave bands of log10(top-20% mean / bottom-20% mean).
double spectral_contrast(std::span<const double> power);
/// Power fractions in eight octave bands ending at Nyquist.
std::array<double, 8> octave_band_ratios(std::span<const double> power);

/// L2 distance between successive unit-norm magnitude frames, one value per
/// frame transition. With `rectified`, only increases count.
std::vector<double> spectral_flux_series(const dsp::Spectrogram& spec, bool rectified = false);

std::vector<double> time_features(const signal::AudioSignal& x, const FeatureConfig& cfg);
std::vector<double> freq_features(const signal::AudioSignal& x, const FeatureConfig& cfg);
std::vector<double> timefreq_features(const signal::AudioSignal& x, const FeatureConfig& cfg);

std::vector<double> time_features(const signal::AudioSignal& x);
std::vector<double> freq_features(const signal::AudioSignal& x);
std::vector<double> timefreq_features(const signal::AudioSignal& x);

/// time[0..34] ++ frequency[35..79] ++ time-frequency[80..126].
FeatureVector extract_all(const signal::AudioSignal& x, const FeatureConfig& cfg);
FeatureVector extract_all(const signal::AudioSignal& x);

/// Extracts every signal, using up to `threads` workers (0 = hardware
/// concurrency). Row i always holds signal i.
Matrix extract_batch(std::span<const signal::AudioSignal> signals, unsigned threads = 1);

/// Per-feature z-scoring. Columns with zero spread get scale 1.
class Scaler {
 public:
  static Scaler fit(const Matrix& x);
  Matrix transform(const Matrix& x) const;
  std::vector<double> transform(std::span<const double> row) const;

  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& scale() const noexcept { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

struct Standardized {
  Dataset train;
  Dataset apply_to;
  Scaler scaler;
};

/// Fits a scaler on `train` only and applies it to both datasets.
Standardized standardize(const Dataset& train, const Dataset& apply_to);

/// Features CSV: `source,label` then one column per registry name.
void write_features_csv(std::ostream& out, const Dataset& data);
Dataset read_features_csv(std::istream& in, const std::string& name = "<stream>");

}  // namespace acbench::features
