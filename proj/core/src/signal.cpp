#include "acbench/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "acbench/error.hpp"
#include "acbench/fft.hpp"

namespace acbench::signal {

AudioSignal::AudioSignal(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (samples_.empty()) throw InvalidArgument("AudioSignal: no samples");
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw InvalidArgument("AudioSignal: sample rate must be positive");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InvalidArgument("AudioSignal: non-finite sample at index " + std::to_string(i));
    }
  }
}

NoiseProfile::NoiseProfile(std::vector<double> magnitude) : magnitude_(std::move(magnitude)) {
  for (double m : magnitude_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw InvalidArgument("NoiseProfile: magnitudes must be finite and non-negative");
    }
  }
}

std::size_t frame_count(std::size_t n, std::size_t window_size, std::size_t hop) {
  if (hop == 0 || window_size == 0 || hop > window_size) {
    throw InvalidArgument("frame_signal: require 0 < hop <= window_size");
  }
  if (window_size > n) {
    throw InvalidArgument("frame_signal: window of " + std::to_string(window_size) +
                          " samples is longer than the signal (" + std::to_string(n) + ")");
  }
  return (n - window_size) / hop + 1;
}

FrameSequence frame_signal(const AudioSignal& x, std::size_t window_size, std::size_t hop) {
  const std::size_t count = frame_count(x.size(), window_size, hop);
  FrameSequence seq;
  seq.window_size = window_size;
  seq.hop = hop;
  seq.sample_rate_hz = x.sample_rate_hz();
  seq.frames.reserve(count);
  const auto s = x.samples();
  for (std::size_t m = 0; m < count; ++m) {
    const auto first = s.begin() + static_cast<std::ptrdiff_t>(m * hop);
    seq.frames.emplace_back(first, first + static_cast<std::ptrdiff_t>(window_size));
  }
  return seq;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

std::vector<double> overlap_add(const std::vector<std::vector<double>>& frames,
                                std::size_t hop, std::size_t length) {
  std::vector<double> out(length, 0.0);
  for (std::size_t m = 0; m < frames.size(); ++m) {
    const std::size_t offset = m * hop;
    for (std::size_t i = 0; i < frames[m].size() && offset + i < length; ++i) {
      out[offset + i] += frames[m][i];
    }
  }
  return out;
}

double subtract_magnitude(double noisy, double noise, double alpha, double beta) noexcept {
  return std::max(noisy - alpha * noise, beta * noisy);
}

std::size_t subtraction_bin_count(const SpectralSubtraction& params) {
  return dsp::next_power_of_two(params.window_size) / 2 + 1;
}

namespace {

struct PaddedFrames {
  std::vector<double> padded;
  std::size_t lead = 0;
  std::size_t count = 0;
};

// Pads so that every original sample lies under at least one full analysis
// window; the lead pad is window - hop.
PaddedFrames pad_for_analysis(std::span<const double> x, const SpectralSubtraction& p) {
  PaddedFrames out;
  out.lead = p.window_size - p.hop;
  const std::size_t needed = out.lead + x.size() + out.lead;
  out.count = needed <= p.window_size ? 1 : (needed - p.window_size + p.hop - 1) / p.hop + 1;
  out.padded.assign((out.count - 1) * p.hop + p.window_size, 0.0);
  std::copy(x.begin(), x.end(), out.padded.begin() + static_cast<std::ptrdiff_t>(out.lead));
  return out;
}

void validate(const SpectralSubtraction& p) {
  if (!(p.alpha >= 1.0 && p.alpha <= 3.0)) {
    throw InvalidArgument("spectral_subtract: alpha must lie in [1, 3]");
  }
  if (!(p.beta >= 0.0 && p.beta < 1.0)) {
    throw InvalidArgument("spectral_subtract: beta must lie in [0, 1)");
  }
  if (p.hop == 0 || p.hop > p.window_size) {
    throw InvalidArgument("spectral_subtract: require 0 < hop <= window_size");
  }
}

}  // namespace

AudioSignal spectral_subtract(const AudioSignal& noisy, const NoiseProfile& noise,
                              const SpectralSubtraction& params) {
  validate(params);
  const std::size_t nfft = dsp::next_power_of_two(params.window_size);
  if (noise.bin_count() != nfft / 2 + 1) {
    throw InvalidArgument("spectral_subtract: noise profile has " +
                          std::to_string(noise.bin_count()) + " bins, analysis needs " +
                          std::to_string(nfft / 2 + 1));
  }

  const auto window = hann_window(params.window_size);
  const auto framed = pad_for_analysis(noisy.samples(), params);
  const auto noise_mag = noise.magnitude();

  std::vector<double> out(framed.padded.size(), 0.0);
  std::vector<double> window_sum(framed.padded.size(), 0.0);
  std::vector<dsp::Complex> buf(nfft);

  for (std::size_t m = 0; m < framed.count; ++m) {
    const std::size_t offset = m * params.hop;
    std::fill(buf.begin(), buf.end(), dsp::Complex{});
    for (std::size_t i = 0; i < params.window_size; ++i) {
      buf[i] = framed.padded[offset + i] * window[i];
    }
    dsp::fft_inplace(buf);
    for (std::size_t k = 0; k <= nfft / 2; ++k) {
      const double mag = std::abs(buf[k]);
      if (mag == 0.0) continue;
      const double cleaned = subtract_magnitude(mag, noise_mag[k], params.alpha, params.beta);
      buf[k] *= cleaned / mag;
      if (k != 0 && k != nfft / 2) buf[nfft - k] = std::conj(buf[k]);
    }
    dsp::fft_inplace(buf, true);
    for (std::size_t i = 0; i < params.window_size; ++i) {
      out[offset + i] += buf[i].real();
      window_sum[offset + i] += window[i];
    }
  }

  std::vector<double> result(noisy.size());
  for (std::size_t i = 0; i < result.size(); ++i) {
    const double ws = window_sum[framed.lead + i];
    result[i] = ws > 1e-12 ? out[framed.lead + i] / ws : 0.0;
  }
  return AudioSignal(std::move(result), noisy.sample_rate_hz());
}

NoiseProfile estimate_noise_profile(const AudioSignal& x, const SpectralSubtraction& params,
                                    double lead_seconds) {
  validate(params);
  const std::size_t nfft = dsp::next_power_of_two(params.window_size);
  const auto lead = static_cast<std::size_t>(std::llround(lead_seconds * x.sample_rate_hz()));
  const std::size_t take = std::clamp<std::size_t>(lead, 1, x.size());
  const auto samples = x.samples().first(take);
  const auto window = hann_window(params.window_size);
  const auto framed = pad_for_analysis(samples, params);

  std::vector<double> mean(nfft / 2 + 1, 0.0);
  std::vector<dsp::Complex> buf(nfft);
  for (std::size_t m = 0; m < framed.count; ++m) {
    std::fill(buf.begin(), buf.end(), dsp::Complex{});
    for (std::size_t i = 0; i < params.window_size; ++i) {
      buf[i] = framed.padded[m * params.hop + i] * window[i];
    }
    dsp::fft_inplace(buf);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += std::abs(buf[k]);
  }
  for (double& v : mean) v /= static_cast<double>(framed.count);
  return NoiseProfile(std::move(mean));
}

double rms(std::span<const double> x) noexcept {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double peak(std::span<const double> x) noexcept {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

AudioSignal normalize_amplitude(const AudioSignal& x) {
  const double p = peak(x.samples());
  if (p == 0.0) throw DegenerateInput("normalize_amplitude: all-zero signal");
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& v : out) v /= p;
  return AudioSignal(std::move(out), x.sample_rate_hz());
}

AudioSignal normalize_rms(const AudioSignal& x) {
  const double r = rms(x.samples());
  if (r == 0.0) throw DegenerateInput("normalize_rms: all-zero signal");
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& v : out) v /= r;
  return AudioSignal(std::move(out), x.sample_rate_hz());
}

}  // namespace acbench::signal
