#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "acbench/fft.hpp"
#include "acbench/matrix.hpp"
#include "acbench/signal.hpp"

namespace acbench::dsp {

/// Per-frame one-sided power spectra. Rows are frames, columns bins.
struct Spectrogram {
  Matrix power;
  std::vector<double> frame_times_s;
  double bin_hz = 0.0;
  /// Transform length each frame was zero-padded to.
  std::size_t fft_size = 0;

  std::size_t frames() const noexcept { return power.rows(); }
  std::size_t bins() const noexcept { return power.cols(); }
};

/// Hann-windowed frames, each zero-padded to the next power of two, with
/// power[m][k] = |X[m,k]|^2. Frame times are the frame centres.
Spectrogram stft(const signal::AudioSignal& x, std::size_t window_size, std::size_t hop);

/// Mean of the spectrogram rows (Welch-style long-term power spectrum).
std::vector<double> mean_power(const Spectrogram& spec);

double hz_to_mel(double hz) noexcept;
double mel_to_hz(double mel) noexcept;

/// Triangular filters with centres equally spaced on the mel scale between
/// 0 Hz and Nyquist. Rows are filters, columns one-sided FFT bins; weights are
/// evaluated at the exact bin frequency.
Matrix mel_filterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate_hz);

/// Orthonormal DCT-II of `x`, first `n_out` coefficients.
std::vector<double> dct2_orthonormal(std::span<const double> x, std::size_t n_out);

struct MfccConfig {
  std::size_t n_coeffs = 13;
  std::size_t n_filters = 26;
  std::size_t window_size = 512;
  std::size_t hop = 256;
  /// Filter energies below this are clamped before the log.
  double log_floor = 1e-10;
};

/// Cepstra of one power spectrum: filterbank, natural log, DCT-II.
std::vector<double> mfcc_from_power(std::span<const double> power, const Matrix& filterbank,
                                    std::size_t n_coeffs, double log_floor = 1e-10);

/// Frame-level MFCCs from an existing spectrogram. Rows are frames.
Matrix mfcc_frames(const Spectrogram& spec, double sample_rate_hz, const MfccConfig& cfg = {});

/// Per-coefficient mean of the frame-level MFCCs; length is cfg.n_coeffs.
std::vector<double> mfcc(const signal::AudioSignal& x, const MfccConfig& cfg = {});
std::vector<double> mfcc(const signal::AudioSignal& x, std::size_t n_coeffs);

/// Pitch class (0 = C, 9 = A) of a frequency relative to A4 = 440 Hz.
int pitch_class(double hz) noexcept;

/// Frame-averaged 12-bin chroma vector; bin power below 20 Hz is ignored.
std::array<double, 12> chroma_vector(const Spectrogram& spec, double sample_rate_hz);

/// Mean of the 12 frame-averaged chroma values.
double chroma_mean(const Spectrogram& spec, double sample_rate_hz);

}  // namespace acbench::dsp
