#include "acbench/features.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "acbench/error.hpp"
#include "acbench/wavelet.hpp"

namespace acbench::features {
namespace {

constexpr double kTiny = 1e-300;

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

// Population moments. Variance that is rounding noise relative to the values
// themselves counts as zero, which keeps skewness/kurtosis of constants at 0.
Moments moments(std::span<const double> x) {
  Moments m;
  if (x.empty()) return m;
  const double n = static_cast<double>(x.size());
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double scale = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    scale = std::max(scale, std::abs(v));
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 <= 1e-24 * scale * scale || m2 < kTiny) {
    return m;
  }
  m.variance = m2;
  m.skewness = m3 / std::pow(m2, 1.5);
  m.kurtosis = m4 / (m2 * m2);
  return m;
}

double stddev(std::span<const double> x) { return std::sqrt(moments(x).variance); }

double mean_of(std::span<const double> x) {
  return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double max_of(std::span<const double> x) {
  return x.empty() ? 0.0 : *std::max_element(x.begin(), x.end());
}

double ratio(double num, double den) { return den > kTiny ? num / den : 0.0; }

// Linear-interpolated percentile of sorted data (numpy's default rule).
double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double zero_crossing_rate(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  std::size_t changes = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if ((x[i - 1] < 0.0) != (x[i] < 0.0)) ++changes;
  }
  return static_cast<double>(changes) / static_cast<double>(x.size() - 1);
}

double normalized_entropy(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= kTiny || weights.size() < 2) return 0.0;
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) {
      const double p = w / total;
      h -= p * std::log2(p);
    }
  }
  return h / std::log2(static_cast<double>(weights.size()));
}

// Autocorrelation of the mean-removed signal via zero-padded FFT.
std::vector<double> autocorrelation(std::span<const double> x, double mean) {
  const std::size_t n = dsp::next_power_of_two(2 * x.size());
  std::vector<dsp::Complex> buf(n);
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i] - mean;
  dsp::fft_inplace(buf);
  for (auto& z : buf) z = std::norm(z);
  dsp::fft_inplace(buf, true);
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = buf[i].real();
  return r;
}

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> v) { return {mean_of(v), stddev(v), max_of(v)}; }

// Half-open octave band [lo, hi) in bins, with the last band closed at Nyquist.
std::pair<std::size_t, std::size_t> octave_band(std::size_t bins, std::size_t band,
                                                std::size_t n_bands) {
  const std::size_t nyquist_bin = bins - 1;
  const auto edge = [&](std::size_t b) -> std::size_t {
    if (b == 0) return 0;
    if (b >= n_bands) return bins;
    const double e = static_cast<double>(nyquist_bin) / std::pow(2.0, static_cast<double>(n_bands - b));
    return static_cast<std::size_t>(std::ceil(e));
  };
  return {edge(band), edge(band + 1)};
}

}  // namespace

FeatureConfig FeatureConfig::for_sample_rate(double sample_rate_hz) {
  FeatureConfig cfg;
  cfg.window_size = dsp::next_power_of_two(
      static_cast<std::size_t>(std::llround(0.032 * sample_rate_hz)));
  cfg.window_size = std::max<std::size_t>(cfg.window_size, 64);
  cfg.hop = cfg.window_size / 2;
  return cfg;
}

double spectral_centroid(std::span<const double> power, double bin_hz) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    num += static_cast<double>(k) * bin_hz * power[k];
    den += power[k];
  }
  return ratio(num, den);
}

double spectral_bandwidth(std::span<const double> power, double bin_hz) {
  const double c = spectral_centroid(power, bin_hz);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double d = static_cast<double>(k) * bin_hz - c;
    num += d * d * power[k];
    den += power[k];
  }
  return std::sqrt(ratio(num, den));
}

double spectral_rolloff(std::span<const double> power, double bin_hz, double fraction) {
  const double total = std::accumulate(power.begin(), power.end(), 0.0);
  if (total <= kTiny) return 0.0;
  const double target = fraction * total;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    cumulative += power[k];
    if (cumulative >= target) return static_cast<double>(k) * bin_hz;
  }
  return static_cast<double>(power.size() - 1) * bin_hz;
}

double spectral_flatness(std::span<const double> power) {
  if (power.empty()) return 0.0;
  const double mean = mean_of(power);
  if (mean <= kTiny) return 0.0;
  constexpr double floor = 1e-20;
  double log_sum = 0.0;
  for (double p : power) log_sum += std::log(p + floor);
  const double geometric = std::exp(log_sum / static_cast<double>(power.size()));
  return geometric / (mean + floor);
}

double spectral_entropy(std::span<const double> power) { return normalized_entropy(power); }

double spectral_skewness(std::span<const double> power, double bin_hz) {
  const double c = spectral_centroid(power, bin_hz);
  const double bw = spectral_bandwidth(power, bin_hz);
  if (bw <= kTiny) return 0.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double d = (static_cast<double>(k) * bin_hz - c) / bw;
    num += d * d * d * power[k];
    den += power[k];
  }
  return ratio(num, den);
}

double spectral_kurtosis(std::span<const double> power, double bin_hz) {
  const double c = spectral_centroid(power, bin_hz);
  const double bw = spectral_bandwidth(power, bin_hz);
  if (bw <= kTiny) return 0.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double d = (static_cast<double>(k) * bin_hz - c) / bw;
    num += d * d * d * d * power[k];
    den += power[k];
  }
  return ratio(num, den);
}

double dominant_frequency(std::span<const double> power, double bin_hz) {
  if (power.empty()) return 0.0;
  const auto it = std::max_element(power.begin(), power.end());
  if (*it <= 0.0) return 0.0;
  return static_cast<double>(it - power.begin()) * bin_hz;
}

double spectral_contrast(std::span<const double> power) {
  constexpr std::size_t kBands = 6;
  constexpr double kQuantile = 0.2;
  constexpr double kEps = 1e-12;
  if (power.size() < 2) return 0.0;
  double acc = 0.0;
  std::size_t used = 0;
  std::vector<double> band;
  for (std::size_t b = 0; b < kBands; ++b) {
    const auto [lo, hi] = octave_band(power.size(), b, kBands);
    if (hi <= lo) continue;
    band.assign(power.begin() + static_cast<std::ptrdiff_t>(lo),
                power.begin() + static_cast<std::ptrdiff_t>(hi));
    std::sort(band.begin(), band.end());
    const std::size_t take = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::round(kQuantile * static_cast<double>(band.size()))));
    double valley = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < take; ++i) {
      valley += band[i];
      peak += band[band.size() - 1 - i];
    }
    valley /= static_cast<double>(take);
    peak /= static_cast<double>(take);
    acc += std::log10((peak + kEps) / (valley + kEps));
    ++used;
  }
  return used ? acc / static_cast<double>(used) : 0.0;
}

std::array<double, 8> octave_band_ratios(std::span<const double> power) {
  std::array<double, 8> out{};
  const double total = std::accumulate(power.begin(), power.end(), 0.0);
  if (total <= kTiny || power.size() < 2) return out;
  for (std::size_t b = 0; b < out.size(); ++b) {
    const auto [lo, hi] = octave_band(power.size(), b, out.size());
    double e = 0.0;
    for (std::size_t k = lo; k < hi; ++k) e += power[k];
    out[b] = e / total;
  }
  return out;
}

std::vector<double> spectral_flux_series(const dsp::Spectrogram& spec, bool rectified) {
  std::vector<double> flux;
  if (spec.frames() < 2) return flux;
  const std::size_t bins = spec.bins();
  std::vector<double> prev(bins, 0.0);
  std::vector<double> cur(bins, 0.0);
  const auto unit_magnitude = [&](std::size_t m, std::vector<double>& out) {
    const auto row = spec.power.row(m);
    double norm = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      out[k] = std::sqrt(row[k]);
      norm += row[k];
    }
    norm = std::sqrt(norm);
    for (double& v : out) v = norm > kTiny ? v / norm : 0.0;
  };
  unit_magnitude(0, prev);
  flux.reserve(spec.frames() - 1);
  for (std::size_t m = 1; m < spec.frames(); ++m) {
    unit_magnitude(m, cur);
    double acc = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      double d = cur[k] - prev[k];
      if (rectified && d < 0.0) d = 0.0;
      acc += d * d;
    }
    flux.push_back(std::sqrt(acc));
    std::swap(prev, cur);
  }
  return flux;
}

std::vector<double> time_features(const signal::AudioSignal& x, const FeatureConfig& cfg) {
  const auto s = x.samples();
  const double n = static_cast<double>(s.size());
  const double fs = x.sample_rate_hz();
  std::vector<double> f;
  f.reserve(kTimeCount);

  const Moments mom = moments(s);
  const double rms = signal::rms(s);
  const double pk = signal::peak(s);
  double abs_sum = 0.0;
  double sqrt_abs_sum = 0.0;
  double weighted = 0.0;
  double mad = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = std::abs(s[i]);
    abs_sum += a;
    sqrt_abs_sum += std::sqrt(a);
    weighted += static_cast<double>(i) * a;
    mad += std::abs(s[i] - mom.mean);
  }
  const double mean_abs = abs_sum / n;
  const double mean_sqrt_abs = sqrt_abs_sum / n;

  std::vector<double> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());

  f.push_back(mom.mean);
  f.push_back(mom.variance);
  f.push_back(std::sqrt(mom.variance));
  f.push_back(mom.skewness);
  f.push_back(mom.kurtosis);
  f.push_back(rms);
  f.push_back(pk);
  f.push_back(ratio(pk, rms));
  f.push_back(ratio(rms, mean_abs));
  f.push_back(ratio(pk, mean_abs));
  f.push_back(ratio(pk, mean_sqrt_abs * mean_sqrt_abs));
  f.push_back(zero_crossing_rate(s));
  f.push_back(ratio(weighted, abs_sum) / fs);
  f.push_back(sorted.front());
  f.push_back(sorted.back());
  f.push_back(sorted.back() - sorted.front());
  f.push_back(percentile_sorted(sorted, 0.5));
  f.push_back(mean_abs);
  f.push_back(10.0 * std::log10(rms * rms + 1e-12));
  const double p25 = percentile_sorted(sorted, 0.25);
  const double p75 = percentile_sorted(sorted, 0.75);
  f.push_back(percentile_sorted(sorted, 0.05));
  f.push_back(p25);
  f.push_back(p75);
  f.push_back(percentile_sorted(sorted, 0.95));
  f.push_back(p75 - p25);
  f.push_back(mad / n);

  // Short-frame energy and crossing statistics.
  std::vector<double> frame_rms;
  std::vector<double> frame_zcr;
  std::vector<double> frame_energy;
  if (s.size() >= cfg.window_size) {
    const auto frames = signal::frame_signal(x, cfg.window_size, cfg.hop);
    for (const auto& fr : frames.frames) {
      const double r = signal::rms(fr);
      frame_rms.push_back(r);
      frame_energy.push_back(r * r);
      frame_zcr.push_back(zero_crossing_rate(fr));
    }
  }
  const Summary rms_summary = summarize(frame_rms);
  f.push_back(rms_summary.mean);
  f.push_back(rms_summary.std);
  f.push_back(rms_summary.max);
  f.push_back(stddev(frame_zcr));

  // Autocorrelation-based periodicity.
  double lag1 = 0.0;
  double period = 0.0;
  if (mom.variance > 0.0 && s.size() >= 2) {
    const auto r = autocorrelation(s, mom.mean);
    lag1 = ratio(r[1], r[0]);
    const auto min_lag = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.001 * fs)));
    const auto max_lag = std::min<std::size_t>(static_cast<std::size_t>(std::floor(0.05 * fs)),
                                               s.size() / 2);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      if (r[lag] > best) {
        best = r[lag];
        period = static_cast<double>(lag) / fs;
      }
    }
  }
  f.push_back(lag1);
  f.push_back(period);
  f.push_back(normalized_entropy(frame_energy));

  // Amplitude histogram entropy over [min, max].
  double hist_entropy = 0.0;
  const double range = sorted.back() - sorted.front();
  if (range > 0.0) {
    std::array<double, 32> hist{};
    for (double v : s) {
      auto b = static_cast<std::size_t>((v - sorted.front()) / range * 32.0);
      hist[std::min<std::size_t>(b, 31)] += 1.0;
    }
    hist_entropy = normalized_entropy(hist);
  }
  f.push_back(hist_entropy);

  double outliers = 0.0;
  const double sigma = std::sqrt(mom.variance);
  if (sigma > 0.0) {
    for (double v : s) {
      if (std::abs(v - mom.mean) > 3.0 * sigma) outliers += 1.0;
    }
    outliers /= n;
  }
  f.push_back(outliers);

  double teager = 0.0;
  if (s.size() >= 3) {
    for (std::size_t i = 1; i + 1 < s.size(); ++i) teager += s[i] * s[i] - s[i - 1] * s[i + 1];
    teager /= static_cast<double>(s.size() - 2);
  }
  f.push_back(teager);
  return f;
}

std::vector<double> freq_features(const signal::AudioSignal& x, const FeatureConfig& cfg) {
  if (x.size() < cfg.window_size) {
    throw InvalidArgument("freq_features: signal shorter than one analysis window (" +
                          std::to_string(cfg.window_size) + " samples)");
  }
  const double fs = x.sample_rate_hz();
  const auto spec = dsp::stft(x, cfg.window_size, cfg.hop);
  const auto power = dsp::mean_power(spec);
  const double bin_hz = spec.bin_hz;

  std::vector<double> f;
  f.reserve(kFrequencyCount);
  f.push_back(spectral_centroid(power, bin_hz));
  f.push_back(spectral_bandwidth(power, bin_hz));
  f.push_back(spectral_rolloff(power, bin_hz, cfg.rolloff));
  f.push_back(mean_of(spectral_flux_series(spec)));
  f.push_back(spectral_flatness(power));
  f.push_back(spectral_entropy(power));
  f.push_back(spectral_contrast(power));
  f.push_back(spectral_skewness(power, bin_hz));
  f.push_back(spectral_kurtosis(power, bin_hz));
  f.push_back(dominant_frequency(power, bin_hz));
  for (double r : octave_band_ratios(power)) f.push_back(r);

  dsp::MfccConfig mcfg;
  mcfg.n_coeffs = cfg.n_mfcc;
  mcfg.n_filters = cfg.n_mel;
  mcfg.window_size = cfg.window_size;
  mcfg.hop = cfg.hop;
  const Matrix cepstra = dsp::mfcc_frames(spec, fs, mcfg);
  std::vector<double> column(cepstra.rows());
  std::vector<double> stds;
  for (std::size_t c = 0; c < cfg.n_mfcc; ++c) {
    for (std::size_t m = 0; m < cepstra.rows(); ++m) column[m] = cepstra(m, c);
    f.push_back(mean_of(column));
    stds.push_back(stddev(column));
  }
  f.insert(f.end(), stds.begin(), stds.end());
  f.push_back(dsp::chroma_mean(spec, fs));

  if (f.size() != kFrequencyCount) {
    throw InvalidArgument("freq_features: configuration yields " + std::to_string(f.size()) +
                          " values; the registry needs " + std::to_string(kFrequencyCount));
  }
  return f;
}

std::vector<double> timefreq_features(const signal::AudioSignal& x, const FeatureConfig& cfg) {
  const std::size_t min_len = std::max(cfg.window_size, std::size_t{1} << cfg.wavelet_levels);
  if (x.size() < min_len) {
    throw InvalidArgument("timefreq_features: signal shorter than " + std::to_string(min_len) +
                          " samples");
  }
  const double fs = x.sample_rate_hz();
  const auto spec = dsp::stft(x, cfg.window_size, cfg.hop);
  const std::size_t frames = spec.frames();
  const std::size_t bins = spec.bins();

  std::vector<double> centroid(frames);
  std::vector<double> bandwidth(frames);
  std::vector<double> rolloff(frames);
  std::vector<double> flatness(frames);
  std::vector<double> entropy(frames);
  std::vector<double> contrast(frames);
  std::vector<double> energy(frames);
  std::vector<double> high_low(frames);
  std::array<std::vector<double>, 8> band_energy;
  for (auto& b : band_energy) b.resize(frames);
  const std::size_t split = (bins - 1) / 4;

  for (std::size_t m = 0; m < frames; ++m) {
    const auto p = spec.power.row(m);
    centroid[m] = spectral_centroid(p, spec.bin_hz);
    bandwidth[m] = spectral_bandwidth(p, spec.bin_hz);
    rolloff[m] = spectral_rolloff(p, spec.bin_hz, cfg.rolloff);
    flatness[m] = spectral_flatness(p);
    entropy[m] = spectral_entropy(p);
    contrast[m] = spectral_contrast(p);
    double e = 0.0;
    double lo = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      e += p[k];
      if (k < split) lo += p[k];
    }
    energy[m] = e;
    high_low[m] = ratio(e - lo, lo);
    for (std::size_t b = 0; b < 8; ++b) {
      const auto [blo, bhi] = octave_band(bins, b, 8);
      double be = 0.0;
      for (std::size_t k = blo; k < bhi; ++k) be += p[k];
      band_energy[b][m] = be;
    }
  }
  const auto flux = spectral_flux_series(spec, true);

  std::vector<double> f;
  f.reserve(kTimeFrequencyCount);
  for (const std::vector<double>* traj :
       std::initializer_list<const std::vector<double>*>{&centroid, &bandwidth, &rolloff, &flatness, &flux}) {
    const Summary s = summarize(*traj);
    f.push_back(s.mean);
    f.push_back(s.std);
    f.push_back(s.max);
  }

  const auto wd = dsp::dwt_energies(x, cfg.wavelet_levels);
  std::vector<double> bands(wd.detail_energies.begin(), wd.detail_energies.end());
  bands.push_back(wd.approx_energy);
  f.insert(f.end(), bands.begin(), bands.end());
  for (double e : bands) f.push_back(ratio(e, wd.total_energy));
  f.push_back(normalized_entropy(bands));

  f.push_back(mean_of(contrast));
  f.push_back(stddev(contrast));

  const Moments energy_mom = moments(energy);
  f.push_back(ratio(std::sqrt(energy_mom.variance), energy_mom.mean));

  // Strongest non-DC component of the frame-energy envelope.
  double modulation = 0.0;
  if (frames >= 2 && energy_mom.variance > 0.0) {
    const std::size_t n = dsp::next_power_of_two(frames);
    std::vector<dsp::Complex> buf(n);
    for (std::size_t m = 0; m < frames; ++m) buf[m] = energy[m] - energy_mom.mean;
    dsp::fft_inplace(buf);
    const double frame_rate = fs / static_cast<double>(cfg.hop);
    double best = 0.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const double mag = std::norm(buf[k]);
      if (mag > best) {
        best = mag;
        modulation = static_cast<double>(k) * frame_rate / static_cast<double>(n);
      }
    }
  }
  f.push_back(modulation);

  for (const auto& be : band_energy) f.push_back(ratio(stddev(be), mean_of(be)));

  f.push_back(mean_of(entropy));
  f.push_back(stddev(entropy));
  f.push_back(ratio(max_of(energy), energy_mom.mean));
  f.push_back(energy_mom.kurtosis);
  f.push_back(mean_of(high_low));

  double slope = 0.0;
  if (frames >= 2) {
    const double t_mean = mean_of(spec.frame_times_s);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = 0; m < frames; ++m) {
      const double dt = spec.frame_times_s[m] - t_mean;
      num += dt * (energy[m] - energy_mom.mean);
      den += dt * dt;
    }
    slope = ratio(ratio(num, den), energy_mom.mean);
  }
  f.push_back(slope);

  double onsets = 0.0;
  if (!flux.empty()) {
    const Summary fs_summary = summarize(flux);
    const double threshold = fs_summary.mean + 2.0 * fs_summary.std;
    for (double v : flux) {
      if (v > threshold && v > 0.0) onsets += 1.0;
    }
    onsets /= x.duration_s();
  }
  f.push_back(onsets);

  if (f.size() != kTimeFrequencyCount) {
    throw InvalidArgument("timefreq_features: configuration yields " + std::to_string(f.size()) +
                          " values; the registry needs " + std::to_string(kTimeFrequencyCount));
  }
  return f;
}

std::vector<double> time_features(const signal::AudioSignal& x) {
  return time_features(x, FeatureConfig::for_sample_rate(x.sample_rate_hz()));
}
std::vector<double> freq_features(const signal::AudioSignal& x) {
  return freq_features(x, FeatureConfig::for_sample_rate(x.sample_rate_hz()));
}
std::vector<double> timefreq_features(const signal::AudioSignal& x) {
  return timefreq_features(x, FeatureConfig::for_sample_rate(x.sample_rate_hz()));
}

FeatureVector extract_all(const signal::AudioSignal& x, const FeatureConfig& cfg) {
  FeatureVector out;
  out.values = time_features(x, cfg);
  const auto freq = freq_features(x, cfg);
  const auto tf = timefreq_features(x, cfg);
  out.values.insert(out.values.end(), freq.begin(), freq.end());
  out.values.insert(out.values.end(), tf.begin(), tf.end());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!std::isfinite(out.values[i])) {
      throw DegenerateInput("extract_all: feature '" + std::string(registry()[i].name) +
                            "' is not finite");
    }
  }
  return out;
}

FeatureVector extract_all(const signal::AudioSignal& x) {
  return extract_all(x, FeatureConfig::for_sample_rate(x.sample_rate_hz()));
}

Matrix extract_batch(std::span<const signal::AudioSignal> signals, unsigned threads) {
  Matrix out(signals.size(), kFeatureCount);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, signals.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < signals.size(); i = next++) {
      try {
        const auto fv = extract_all(signals[i]);
        std::copy(fv.values.begin(), fv.values.end(), out.row(i).begin());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace acbench::features
