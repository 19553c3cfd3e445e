#include "acbench/registry.hpp"

#include <array>
#include <sstream>

#include "acbench/csv.hpp"
#include "acbench/error.hpp"

namespace acbench::features {
namespace {

constexpr Domain T = Domain::Time;
constexpr Domain F = Domain::Frequency;
constexpr Domain TF = Domain::TimeFrequency;
constexpr Scaling INV = Scaling::Invariant;
constexpr Scaling DEP = Scaling::Dependent;
constexpr Scaling APX = Scaling::Approximate;

constexpr std::array<FeatureInfo, kFeatureCount> kRegistry{{
    // Time domain: whole-waveform statistics plus short-frame summaries.
    {0, "Mean", T, DEP, "Arithmetic mean of the samples"},
    {1, "Variance", T, DEP, "Population variance of the samples"},
    {2, "Standard Deviation", T, DEP, "Square root of the variance"},
    {3, "Skewness", T, INV, "Third standardized moment; 0 for zero-variance signals"},
    {4, "Kurtosis", T, INV, "Fourth standardized moment (non-excess); 0 for zero-variance signals"},
    {5, "RMS Energy", T, DEP, "Root mean square amplitude"},
    {6, "Peak Amplitude", T, DEP, "Maximum absolute sample value"},
    {7, "Crest Factor", T, INV, "Peak amplitude over RMS"},
    {8, "Shape Factor", T, INV, "RMS over mean absolute value"},
    {9, "Impulse Factor", T, INV, "Peak amplitude over mean absolute value"},
    {10, "Clearance Factor", T, INV, "Peak amplitude over squared mean of sqrt(|x|)"},
    {11, "Zero Crossing Rate", T, INV, "Sign changes between consecutive samples divided by N-1"},
    {12, "Temporal Centroid", T, INV, "Sum n|x[n]| / sum |x[n]| in seconds"},
    {13, "Minimum", T, DEP, "Smallest sample value"},
    {14, "Maximum", T, DEP, "Largest sample value"},
    {15, "Peak-to-Peak", T, DEP, "Maximum minus minimum"},
    {16, "Median", T, DEP, "50th percentile of the samples"},
    {17, "Mean Absolute Value", T, DEP, "Mean of |x|"},
    {18, "Log Energy", T, DEP, "10 log10(mean(x^2) + 1e-12)"},
    {19, "Percentile 5", T, DEP, "5th percentile, linear interpolation"},
    {20, "Percentile 25", T, DEP, "25th percentile, linear interpolation"},
    {21, "Percentile 75", T, DEP, "75th percentile, linear interpolation"},
    {22, "Percentile 95", T, DEP, "95th percentile, linear interpolation"},
    {23, "Interquartile Range", T, DEP, "Percentile 75 minus percentile 25"},
    {24, "Mean Absolute Deviation", T, DEP, "Mean of |x - mean|"},
    {25, "Frame RMS Mean", T, DEP, "Mean of short-frame RMS values"},
    {26, "Frame RMS Std", T, DEP, "Standard deviation of short-frame RMS values"},
    {27, "Frame RMS Max", T, DEP, "Largest short-frame RMS value"},
    {28, "Frame ZCR Std", T, INV, "Standard deviation of short-frame zero crossing rates"},
    {29, "Autocorrelation Lag-1", T, INV, "Normalized autocorrelation at one sample lag"},
    {30, "Dominant Period", T, INV, "Lag in seconds (1-50 ms) of the autocorrelation maximum"},
    {31, "Energy Entropy", T, INV, "Normalized Shannon entropy of short-frame energies"},
    {32, "Amplitude Histogram Entropy", T, APX, "Normalized entropy of a 32-bin amplitude histogram"},
    {33, "Outlier Ratio", T, APX, "Fraction of samples more than 3 standard deviations from the mean"},
    {34, "Teager Energy Mean", T, DEP, "Mean Teager-Kaiser energy x[n]^2 - x[n-1]x[n+1]"},

    // Frequency domain: long-term (frame-averaged) power spectrum.
    {35, "Spectral Centroid", F, INV, "Power-weighted mean frequency in Hz"},
    {36, "Spectral Bandwidth", F, INV, "Power-weighted standard deviation about the centroid in Hz"},
    {37, "Spectral Rolloff", F, INV, "Frequency below which 85% of the power lies"},
    {38, "Spectral Flux", F, INV, "Mean L2 change between successive unit-norm magnitude frames"},
    {39, "Spectral Flatness", F, APX, "Geometric over arithmetic mean of the power spectrum"},
    {40, "Spectral Entropy", F, INV, "Normalized Shannon entropy of the power distribution"},
    {41, "Spectral Contrast", F, APX, "Mean over six octave bands of log10 peak/valley power"},
    {42, "Spectral Skewness", F, INV, "Third standardized moment of the power distribution over frequency"},
    {43, "Spectral Kurtosis", F, INV, "Fourth standardized moment of the power distribution over frequency"},
    {44, "Dominant Frequency", F, INV, "Frequency of the strongest bin"},
    {45, "Octave Band Ratio 1", F, INV, "Power fraction in [0, nyquist/128)"},
    {46, "Octave Band Ratio 2", F, INV, "Power fraction in [nyquist/128, nyquist/64)"},
    {47, "Octave Band Ratio 3", F, INV, "Power fraction in [nyquist/64, nyquist/32)"},
    {48, "Octave Band Ratio 4", F, INV, "Power fraction in [nyquist/32, nyquist/16)"},
    {49, "Octave Band Ratio 5", F, INV, "Power fraction in [nyquist/16, nyquist/8)"},
    {50, "Octave Band Ratio 6", F, INV, "Power fraction in [nyquist/8, nyquist/4)"},
    {51, "Octave Band Ratio 7", F, INV, "Power fraction in [nyquist/4, nyquist/2)"},
    {52, "Octave Band Ratio 8", F, INV, "Power fraction in [nyquist/2, nyquist]"},
    {53, "MFCC-1", F, DEP, "Frame mean of cepstral coefficient 0 (log-energy related)"},
    {54, "MFCC-2", F, INV, "Frame mean of cepstral coefficient 1"},
    {55, "MFCC-3", F, INV, "Frame mean of cepstral coefficient 2"},
    {56, "MFCC-4", F, INV, "Frame mean of cepstral coefficient 3"},
    {57, "MFCC-5", F, INV, "Frame mean of cepstral coefficient 4"},
    {58, "MFCC-6", F, INV, "Frame mean of cepstral coefficient 5"},
    {59, "MFCC-7", F, INV, "Frame mean of cepstral coefficient 6"},
    {60, "MFCC-8", F, INV, "Frame mean of cepstral coefficient 7"},
    {61, "MFCC-9", F, INV, "Frame mean of cepstral coefficient 8"},
    {62, "MFCC-10", F, INV, "Frame mean of cepstral coefficient 9"},
    {63, "MFCC-11", F, INV, "Frame mean of cepstral coefficient 10"},
    {64, "MFCC-12", F, INV, "Frame mean of cepstral coefficient 11"},
    {65, "MFCC-13", F, INV, "Frame mean of cepstral coefficient 12"},
    {66, "MFCC-1 Std", F, INV, "Frame standard deviation of cepstral coefficient 0"},
    {67, "MFCC-2 Std", F, INV, "Frame standard deviation of cepstral coefficient 1"},
    {68, "MFCC-3 Std", F, INV, "Frame standard deviation of cepstral coefficient 2"},
    {69, "MFCC-4 Std", F, INV, "Frame standard deviation of cepstral coefficient 3"},
    {70, "MFCC-5 Std", F, INV, "Frame standard deviation of cepstral coefficient 4"},
    {71, "MFCC-6 Std", F, INV, "Frame standard deviation of cepstral coefficient 5"},
    {72, "MFCC-7 Std", F, INV, "Frame standard deviation of cepstral coefficient 6"},
    {73, "MFCC-8 Std", F, INV, "Frame standard deviation of cepstral coefficient 7"},
    {74, "MFCC-9 Std", F, INV, "Frame standard deviation of cepstral coefficient 8"},
    {75, "MFCC-10 Std", F, INV, "Frame standard deviation of cepstral coefficient 9"},
    {76, "MFCC-11 Std", F, INV, "Frame standard deviation of cepstral coefficient 10"},
    {77, "MFCC-12 Std", F, INV, "Frame standard deviation of cepstral coefficient 11"},
    {78, "MFCC-13 Std", F, INV, "Frame standard deviation of cepstral coefficient 12"},
    {79, "Chroma Mean", F, DEP, "Mean of the frame-averaged 12-bin chroma vector (A4 = 440 Hz)"},

    // Time-frequency domain: STFT trajectories, wavelet subbands, modulation.
    {80, "Centroid Trajectory Mean", TF, INV, "Mean over frames of the spectral centroid"},
    {81, "Centroid Trajectory Std", TF, INV, "Standard deviation over frames of the spectral centroid"},
    {82, "Centroid Trajectory Max", TF, INV, "Maximum over frames of the spectral centroid"},
    {83, "Bandwidth Trajectory Mean", TF, INV, "Mean over frames of the spectral bandwidth"},
    {84, "Bandwidth Trajectory Std", TF, INV, "Standard deviation over frames of the spectral bandwidth"},
    {85, "Bandwidth Trajectory Max", TF, INV, "Maximum over frames of the spectral bandwidth"},
    {86, "Rolloff Trajectory Mean", TF, INV, "Mean over frames of the 85% rolloff"},
    {87, "Rolloff Trajectory Std", TF, INV, "Standard deviation over frames of the 85% rolloff"},
    {88, "Rolloff Trajectory Max", TF, INV, "Maximum over frames of the 85% rolloff"},
    {89, "Flatness Trajectory Mean", TF, APX, "Mean over frames of the spectral flatness"},
    {90, "Flatness Trajectory Std", TF, APX, "Standard deviation over frames of the spectral flatness"},
    {91, "Flatness Trajectory Max", TF, APX, "Maximum over frames of the spectral flatness"},
    {92, "Onset Flux Mean", TF, INV, "Mean half-wave rectified change between unit-norm magnitude frames"},
    {93, "Onset Flux Std", TF, INV, "Standard deviation of the rectified frame-to-frame change"},
    {94, "Onset Flux Max", TF, INV, "Maximum of the rectified frame-to-frame change"},
    {95, "Wavelet energy (D1)", TF, DEP, "db4 level-1 detail coefficient energy"},
    {96, "Wavelet energy (D2)", TF, DEP, "db4 level-2 detail coefficient energy"},
    {97, "Wavelet energy (D3)", TF, DEP, "db4 level-3 detail coefficient energy"},
    {98, "Wavelet energy (D4)", TF, DEP, "db4 level-4 detail coefficient energy"},
    {99, "Wavelet energy (D5)", TF, DEP, "db4 level-5 detail coefficient energy"},
    {100, "Wavelet energy (A5)", TF, DEP, "db4 level-5 approximation coefficient energy"},
    {101, "Relative Wavelet energy (D1)", TF, INV, "D1 energy over total signal energy"},
    {102, "Relative Wavelet energy (D2)", TF, INV, "D2 energy over total signal energy"},
    {103, "Relative Wavelet energy (D3)", TF, INV, "D3 energy over total signal energy"},
    {104, "Relative Wavelet energy (D4)", TF, INV, "D4 energy over total signal energy"},
    {105, "Relative Wavelet energy (D5)", TF, INV, "D5 energy over total signal energy"},
    {106, "Relative Wavelet energy (A5)", TF, INV, "A5 energy over total signal energy"},
    {107, "Wavelet Entropy", TF, INV, "Normalized Shannon entropy of the six relative subband energies"},
    {108, "Spectrogram Contrast Mean", TF, APX, "Mean over frames of the octave-band spectral contrast"},
    {109, "Spectrogram Contrast Std", TF, APX, "Standard deviation over frames of the spectral contrast"},
    {110, "Energy Modulation Index", TF, INV, "Standard deviation over mean of frame energies"},
    {111, "Dominant Modulation Frequency", TF, INV, "Strongest non-DC frequency of the frame-energy envelope"},
    {112, "Band 1 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 1 energy"},
    {113, "Band 2 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 2 energy"},
    {114, "Band 3 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 3 energy"},
    {115, "Band 4 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 4 energy"},
    {116, "Band 5 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 5 energy"},
    {117, "Band 6 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 6 energy"},
    {118, "Band 7 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 7 energy"},
    {119, "Band 8 Energy Variation", TF, INV, "Coefficient of variation over frames of octave band 8 energy"},
    {120, "Spectral Entropy Trajectory Mean", TF, INV, "Mean over frames of the normalized spectral entropy"},
    {121, "Spectral Entropy Trajectory Std", TF, INV, "Standard deviation over frames of the spectral entropy"},
    {122, "Peak Frame Energy Ratio", TF, INV, "Largest frame energy over mean frame energy"},
    {123, "Frame Energy Kurtosis", TF, INV, "Fourth standardized moment of frame energies"},
    {124, "High-Low Energy Ratio", TF, INV, "Frame mean of power above nyquist/4 over power below"},
    {125, "Frame Energy Slope", TF, INV, "Least-squares slope of frame energy per second over mean energy"},
    {126, "Onset Rate", TF, APX, "Frames per second whose rectified flux exceeds mean + 2 std"},
}};

}  // namespace

std::span<const FeatureInfo> registry() { return kRegistry; }

std::optional<std::size_t> find_feature(std::string_view name) {
  for (const auto& f : kRegistry) {
    if (f.name == name) return f.id;
  }
  return std::nullopt;
}

std::size_t feature_index(std::string_view name) {
  if (auto id = find_feature(name)) return *id;
  throw InvalidArgument("unknown feature '" + std::string(name) + "'");
}

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::Time:
      return "time";
    case Domain::Frequency:
      return "frequency";
    case Domain::TimeFrequency:
      return "time-frequency";
  }
  return "?";
}

std::string_view to_string(Scaling s) {
  switch (s) {
    case Scaling::Invariant:
      return "invariant";
    case Scaling::Dependent:
      return "dependent";
    case Scaling::Approximate:
      return "approximate";
  }
  return "?";
}

Domain parse_domain(std::string_view text) {
  if (text == "time") return Domain::Time;
  if (text == "frequency") return Domain::Frequency;
  if (text == "time-frequency") return Domain::TimeFrequency;
  throw InvalidArgument("unknown feature domain '" + std::string(text) + "'");
}

std::string registry_csv() {
  std::ostringstream out;
  out << "# registry_version=" << kRegistryVersion << '\n';
  out << "id,name,domain,scaling,description\n";
  for (const auto& f : kRegistry) {
    out << f.id << ',' << csv_escape(f.name) << ',' << to_string(f.domain) << ','
        << to_string(f.scaling) << ',' << csv_escape(f.description) << '\n';
  }
  return out.str();
}

}  // namespace acbench::features
