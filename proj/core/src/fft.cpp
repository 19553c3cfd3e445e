#include "acbench/fft.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "acbench/error.hpp"

namespace acbench::dsp {
namespace {

// exp(-2*pi*i*k/n) for k < n/2, cached per thread and size.
const std::vector<Complex>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<Complex>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Complex> table(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    table[k] = {std::cos(angle), std::sin(angle)};
  }
  return cache.emplace(n, std::move(table)).first->second;
}

}  // namespace

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::span<Complex> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw InvalidArgument("fft: length " + std::to_string(n) + " is not a power of two");
  }
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const auto& w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex tw = w[k * stride];
        if (inverse) tw = std::conj(tw);
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * tw;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& z : data) z *= scale;
  }
}

Spectrum fft(std::span<const double> x, double sample_rate_hz) {
  Spectrum s;
  s.bins.assign(x.begin(), x.end());
  fft_inplace(s.bins);
  s.bin_hz = sample_rate_hz / static_cast<double>(x.size());
  return s;
}

std::vector<Complex> fft(std::span<const Complex> x) {
  std::vector<Complex> out(x.begin(), x.end());
  fft_inplace(out);
  return out;
}

std::vector<Complex> ifft(std::span<const Complex> x) {
  std::vector<Complex> out(x.begin(), x.end());
  fft_inplace(out, true);
  return out;
}

std::vector<double> power_spectrum(const Spectrum& s) {
  const std::size_t n = s.size();
  std::vector<double> p(n / 2 + 1);
  for (std::size_t k = 0; k < p.size() && k < n; ++k) p[k] = std::norm(s.bins[k]);
  return p;
}

}  // namespace acbench::dsp
