#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace acbench::dsp {

using Complex = std::complex<double>;

/// Full complex spectrum of a length-`size()` transform.
struct Spectrum {
  std::vector<Complex> bins;
  /// Hz per bin: sample_rate / size.
  double bin_hz = 1.0;

  std::size_t size() const noexcept { return bins.size(); }
};

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }
std::size_t next_power_of_two(std::size_t n) noexcept;

/// In-place iterative radix-2 transform. The inverse is scaled by 1/N.
/// Throws InvalidArgument unless the length is a power of two.
void fft_inplace(std::span<Complex> data, bool inverse = false);

/// Forward transform of a real sequence whose length is a power of two.
Spectrum fft(std::span<const double> x, double sample_rate_hz = 1.0);
std::vector<Complex> fft(std::span<const Complex> x);
std::vector<Complex> ifft(std::span<const Complex> x);

/// One-sided power spectrum |X[k]|^2 for k = 0..N/2.
std::vector<double> power_spectrum(const Spectrum& s);

}  // namespace acbench::dsp
