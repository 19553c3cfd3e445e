#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "acbench/signal.hpp"

namespace acbench::dsp {

/// Subband energies of a multi-level discrete wavelet decomposition.
struct WaveletDecomposition {
  /// D1 (finest) .. Dn (coarsest).
  std::vector<double> detail_energies;
  double approx_energy = 0.0;
  double total_energy = 0.0;
};

/// Daubechies length-8 (four vanishing moments) low-pass analysis filter.
const std::array<double, 8>& db4_lowpass();

/// One analysis step with periodic extension. `x` must have even length;
/// returns {approximation, detail}, each half as long.
std::pair<std::vector<double>, std::vector<double>> dwt_step(std::span<const double> x);

/// Inverse of dwt_step.
std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail);

/// db4 decomposition with periodic boundaries. The signal is zero-padded to a
/// multiple of 2^levels, which leaves its energy unchanged.
/// Throws InvalidArgument if the signal is shorter than 2^levels.
WaveletDecomposition dwt_energies(std::span<const double> x, std::size_t levels = 5);
WaveletDecomposition dwt_energies(const signal::AudioSignal& x, std::size_t levels = 5);

}  // namespace acbench::dsp
