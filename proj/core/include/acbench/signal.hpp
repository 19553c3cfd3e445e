#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace acbench::signal {

/// Uniformly sampled mono waveform. Construction validates that the samples
/// are non-empty and finite and that the sample rate is positive.
class AudioSignal {
 public:
  AudioSignal(std::vector<double> samples, double sample_rate_hz);

  std::span<const double> samples() const noexcept { return samples_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  friend bool operator==(const AudioSignal&, const AudioSignal&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_hz_;
};

struct FrameSequence {
  std::vector<std::vector<double>> frames;
  std::size_t window_size = 0;
  std::size_t hop = 0;
  double sample_rate_hz = 0.0;

  std::size_t size() const noexcept { return frames.size(); }
};

/// Magnitude spectrum of the noise, one value per one-sided FFT bin.
class NoiseProfile {
 public:
  explicit NoiseProfile(std::vector<double> magnitude);

  std::span<const double> magnitude() const noexcept { return magnitude_; }
  std::size_t bin_count() const noexcept { return magnitude_.size(); }

 private:
  std::vector<double> magnitude_;
};

/// Number of frames produced by frame_signal: floor((n - window) / hop) + 1.
std::size_t frame_count(std::size_t n, std::size_t window_size, std::size_t hop);

/// Slices the signal into contiguous windows without padding.
FrameSequence frame_signal(const AudioSignal& x, std::size_t window_size, std::size_t hop);

/// Periodic Hann window (sums to a constant under 50% overlap).
std::vector<double> hann_window(std::size_t n);

/// Weighted overlap-add of equal-length frames placed every `hop` samples.
/// Output length is `length`; samples outside any frame are zero.
std::vector<double> overlap_add(const std::vector<std::vector<double>>& frames,
                                std::size_t hop, std::size_t length);

struct SpectralSubtraction {
  /// Over-subtraction factor, 1 <= alpha <= 3.
  double alpha = 1.5;
  /// Spectral floor as a fraction of the noisy magnitude. 0 gives the plain
  /// subtraction rule.
  double beta = 0.01;
  std::size_t window_size = 2048;
  std::size_t hop = 1024;
};

/// Bins of the one-sided spectrum used by the subtraction analysis.
std::size_t subtraction_bin_count(const SpectralSubtraction& params);

/// |S_clean| = max(|S_noisy| - alpha*|N|, beta*|S_noisy|) per STFT frame,
/// noisy phase reused, resynthesized by Hann-windowed overlap-add. The output
/// has the input's length and sample rate.
AudioSignal spectral_subtract(const AudioSignal& noisy, const NoiseProfile& noise,
                              const SpectralSubtraction& params = {});

/// Single-bin form of the subtraction rule.
double subtract_magnitude(double noisy, double noise, double alpha, double beta) noexcept;

/// Mean magnitude spectrum over the leading `lead_seconds` of a recording,
/// using the same analysis frames as spectral_subtract.
NoiseProfile estimate_noise_profile(const AudioSignal& x, const SpectralSubtraction& params = {},
                                    double lead_seconds = 0.25);

/// x / max|x|. Throws DegenerateInput for an all-zero signal.
AudioSignal normalize_amplitude(const AudioSignal& x);

/// x / sqrt(mean(x^2)). Throws DegenerateInput for an all-zero signal.
AudioSignal normalize_rms(const AudioSignal& x);

double rms(std::span<const double> x) noexcept;
double peak(std::span<const double> x) noexcept;

}  // namespace acbench::signal
