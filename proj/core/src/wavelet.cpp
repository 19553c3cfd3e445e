#include "acbench/wavelet.hpp"

#include <string>

#include "acbench/error.hpp"

namespace acbench::dsp {
namespace {

constexpr std::size_t kTaps = 8;

// High-pass by the alternating flip g[n] = (-1)^n h[L-1-n].
std::array<double, kTaps> highpass() {
  const auto& h = db4_lowpass();
  std::array<double, kTaps> g{};
  for (std::size_t n = 0; n < kTaps; ++n) {
    g[n] = (n % 2 == 0 ? 1.0 : -1.0) * h[kTaps - 1 - n];
  }
  return g;
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

}  // namespace

const std::array<double, 8>& db4_lowpass() {
  static const std::array<double, 8> h{
      0.23037781330885523,  0.7148465705525415,  0.6308807679295904,  -0.02798376941698385,
      -0.18703481171888114, 0.030841381835986965, 0.032883011666982945, -0.010597401784997278};
  return h;
}

std::pair<std::vector<double>, std::vector<double>> dwt_step(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2 || n % 2 != 0) throw InvalidArgument("dwt_step: length must be even and >= 2");
  const auto& h = db4_lowpass();
  const auto g = highpass();
  std::vector<double> approx(n / 2, 0.0);
  std::vector<double> detail(n / 2, 0.0);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t t = 0; t < kTaps; ++t) {
      const double v = x[(2 * k + t) % n];
      a += h[t] * v;
      d += g[t] * v;
    }
    approx[k] = a;
    detail[k] = d;
  }
  return {std::move(approx), std::move(detail)};
}

std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail) {
  if (approx.size() != detail.size()) throw InvalidArgument("idwt_step: band length mismatch");
  const std::size_t n = 2 * approx.size();
  const auto& h = db4_lowpass();
  const auto g = highpass();
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < approx.size(); ++k) {
    for (std::size_t t = 0; t < kTaps; ++t) {
      x[(2 * k + t) % n] += h[t] * approx[k] + g[t] * detail[k];
    }
  }
  return x;
}

WaveletDecomposition dwt_energies(std::span<const double> x, std::size_t levels) {
  if (levels == 0) throw InvalidArgument("dwt_energies: need at least one level");
  const std::size_t block = std::size_t{1} << levels;
  if (x.size() < block) {
    throw InvalidArgument("dwt_energies: signal of " + std::to_string(x.size()) +
                          " samples is shorter than 2^" + std::to_string(levels));
  }
  const std::size_t padded = (x.size() + block - 1) / block * block;
  std::vector<double> approx(padded, 0.0);
  std::copy(x.begin(), x.end(), approx.begin());

  WaveletDecomposition out;
  out.total_energy = energy(x);
  out.detail_energies.reserve(levels);
  for (std::size_t level = 0; level < levels; ++level) {
    auto [a, d] = dwt_step(approx);
    out.detail_energies.push_back(energy(d));
    approx = std::move(a);
  }
  out.approx_energy = energy(approx);
  return out;
}

WaveletDecomposition dwt_energies(const signal::AudioSignal& x, std::size_t levels) {
  return dwt_energies(x.samples(), levels);
}

}  // namespace acbench::dsp
