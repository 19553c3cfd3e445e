#include "acbench/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acbench/error.hpp"

namespace acbench::dsp {

Spectrogram stft(const signal::AudioSignal& x, std::size_t window_size, std::size_t hop) {
  const auto frames = signal::frame_signal(x, window_size, hop);
  const auto window = signal::hann_window(window_size);
  const std::size_t nfft = next_power_of_two(window_size);
  const double fs = x.sample_rate_hz();

  Spectrogram spec;
  spec.fft_size = nfft;
  spec.bin_hz = fs / static_cast<double>(nfft);
  spec.power = Matrix(frames.size(), nfft / 2 + 1);
  spec.frame_times_s.resize(frames.size());

  std::vector<Complex> buf(nfft);
  for (std::size_t m = 0; m < frames.size(); ++m) {
    std::fill(buf.begin(), buf.end(), Complex{});
    for (std::size_t i = 0; i < window_size; ++i) buf[i] = frames.frames[m][i] * window[i];
    fft_inplace(buf);
    auto row = spec.power.row(m);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = std::norm(buf[k]);
    spec.frame_times_s[m] =
        (static_cast<double>(m * hop) + 0.5 * static_cast<double>(window_size)) / fs;
  }
  return spec;
}

std::vector<double> mean_power(const Spectrogram& spec) {
  std::vector<double> mean(spec.bins(), 0.0);
  if (spec.frames() == 0) return mean;
  for (std::size_t m = 0; m < spec.frames(); ++m) {
    const auto row = spec.power.row(m);
    for (std::size_t k = 0; k < row.size(); ++k) mean[k] += row[k];
  }
  for (double& v : mean) v /= static_cast<double>(spec.frames());
  return mean;
}

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) noexcept { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix mel_filterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate_hz) {
  if (n_filters == 0) throw InvalidArgument("mel_filterbank: need at least one filter");
  if (!is_power_of_two(fft_size)) throw InvalidArgument("mel_filterbank: fft size must be a power of two");
  const std::size_t bins = fft_size / 2 + 1;
  const double nyquist = sample_rate_hz / 2.0;
  const double mel_max = hz_to_mel(nyquist);

  std::vector<double> edges(n_filters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / static_cast<double>(n_filters + 1));
  }

  Matrix fb(n_filters, bins);
  for (std::size_t j = 0; j < n_filters; ++j) {
    const double lo = edges[j];
    const double centre = edges[j + 1];
    const double hi = edges[j + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate_hz / static_cast<double>(fft_size);
      double w = 0.0;
      if (f >= lo && f <= centre) {
        w = (f - lo) / (centre - lo);
      } else if (f > centre && f <= hi) {
        w = (hi - f) / (hi - centre);
      }
      fb(j, k) = w;
    }
  }
  return fb;
}

std::vector<double> dct2_orthonormal(std::span<const double> x, std::size_t n_out) {
  const std::size_t n = x.size();
  std::vector<double> out(std::min(n_out, n), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) *
                             (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));
    }
    const double scale = k == 0 ? std::sqrt(1.0 / static_cast<double>(n))
                                : std::sqrt(2.0 / static_cast<double>(n));
    out[k] = scale * acc;
  }
  return out;
}

std::vector<double> mfcc_from_power(std::span<const double> power, const Matrix& filterbank,
                                    std::size_t n_coeffs, double log_floor) {
  if (power.size() != filterbank.cols()) {
    throw InvalidArgument("mfcc: power spectrum length does not match the filterbank");
  }
  if (n_coeffs == 0 || n_coeffs > filterbank.rows()) {
    throw InvalidArgument("mfcc: coefficient count must lie in [1, filter count]");
  }
  std::vector<double> log_energy(filterbank.rows());
  for (std::size_t j = 0; j < filterbank.rows(); ++j) {
    const auto w = filterbank.row(j);
    double e = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) e += w[k] * power[k];
    log_energy[j] = std::log(std::max(e, log_floor));
  }
  return dct2_orthonormal(log_energy, n_coeffs);
}

Matrix mfcc_frames(const Spectrogram& spec, double sample_rate_hz, const MfccConfig& cfg) {
  const Matrix fb = mel_filterbank(cfg.n_filters, spec.fft_size, sample_rate_hz);
  Matrix out(spec.frames(), cfg.n_coeffs);
  for (std::size_t m = 0; m < spec.frames(); ++m) {
    const auto c = mfcc_from_power(spec.power.row(m), fb, cfg.n_coeffs, cfg.log_floor);
    std::copy(c.begin(), c.end(), out.row(m).begin());
  }
  return out;
}

std::vector<double> mfcc(const signal::AudioSignal& x, const MfccConfig& cfg) {
  if (x.size() < cfg.window_size) {
    throw InvalidArgument("mfcc: signal shorter than one analysis window");
  }
  const auto spec = stft(x, cfg.window_size, cfg.hop);
  const Matrix frames = mfcc_frames(spec, x.sample_rate_hz(), cfg);
  std::vector<double> mean(cfg.n_coeffs, 0.0);
  for (std::size_t m = 0; m < frames.rows(); ++m) {
    for (std::size_t c = 0; c < cfg.n_coeffs; ++c) mean[c] += frames(m, c);
  }
  for (double& v : mean) v /= static_cast<double>(frames.rows());
  return mean;
}

std::vector<double> mfcc(const signal::AudioSignal& x, std::size_t n_coeffs) {
  MfccConfig cfg;
  cfg.n_coeffs = n_coeffs;
  return mfcc(x, cfg);
}

int pitch_class(double hz) noexcept {
  const auto semitones = static_cast<long>(std::lround(12.0 * std::log2(hz / 440.0)));
  return static_cast<int>(((semitones + 9) % 12 + 12) % 12);
}

std::array<double, 12> chroma_vector(const Spectrogram& spec, double sample_rate_hz) {
  std::array<double, 12> chroma{};
  if (spec.frames() == 0) return chroma;
  const double bin_hz = sample_rate_hz / static_cast<double>(spec.fft_size);
  std::vector<int> pc(spec.bins(), -1);
  for (std::size_t k = 1; k < spec.bins(); ++k) {
    const double f = static_cast<double>(k) * bin_hz;
    if (f >= 20.0) pc[k] = pitch_class(f);
  }
  for (std::size_t m = 0; m < spec.frames(); ++m) {
    const auto row = spec.power.row(m);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (pc[k] >= 0) chroma[static_cast<std::size_t>(pc[k])] += row[k];
    }
  }
  for (double& v : chroma) v /= static_cast<double>(spec.frames());
  return chroma;
}

double chroma_mean(const Spectrogram& spec, double sample_rate_hz) {
  const auto chroma = chroma_vector(spec, sample_rate_hz);
  double acc = 0.0;
  for (double v : chroma) acc += v;
  return acc / 12.0;
}

}  // namespace acbench::dsp
