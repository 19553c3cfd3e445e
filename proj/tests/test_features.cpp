#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "acbench/dsp.hpp"
#include "acbench/error.hpp"
#include "acbench/features.hpp"
#include "acbench/registry.hpp"
#include "acbench/synth.hpp"
#include "acbench/wavelet.hpp"

using namespace acbench;
using namespace acbench::features;
using acbench::signal::AudioSignal;

namespace {

AudioSignal tone(double hz, double amplitude, std::size_t n, double fs = 16000.0) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
  }
  return AudioSignal(std::move(s), fs);
}

AudioSignal gaussian(std::size_t n, std::uint64_t seed, double fs = 16000.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> s(n);
  for (double& v : s) v = dist(rng);
  return AudioSignal(std::move(s), fs);
}

double at(const std::vector<double>& v, std::string_view name) { return v[feature_index(name)]; }

const std::vector<std::pair<std::string_view, Domain>> kPaperTopFeatures{
    {"Spectral Centroid", Domain::Frequency},    {"MFCC-1", Domain::Frequency},
    {"RMS Energy", Domain::Time},                {"Zero Crossing Rate", Domain::Time},
    {"Spectral Rolloff", Domain::Frequency},     {"MFCC-2", Domain::Frequency},
    {"Spectral Bandwidth", Domain::Frequency},   {"Crest Factor", Domain::Time},
    {"MFCC-3", Domain::Frequency},               {"Spectral Flux", Domain::Frequency},
    {"Wavelet energy (D4)", Domain::TimeFrequency}, {"Temporal Centroid", Domain::Time},
    {"Spectral Contrast", Domain::Frequency},    {"MFCC-4", Domain::Frequency},
    {"Chroma Mean", Domain::Frequency},
};

}  // namespace

TEST(Registry, CountsAndOrder) {
  auto reg = registry();
  ASSERT_EQ(reg.size(), 127u);
  std::size_t counts[3] = {0, 0, 0};
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    EXPECT_EQ(reg[i].id, i);
    ++counts[static_cast<int>(reg[i].domain)];
    EXPECT_TRUE(names.insert(reg[i].name).second) << "duplicate " << reg[i].name;
    EXPECT_FALSE(reg[i].description.empty());
    // Domain blocks are contiguous in registry order.
    const Domain expected = i < kTimeCount ? Domain::Time
                            : i < kTimeFrequencyOffset ? Domain::Frequency
                                                       : Domain::TimeFrequency;
    EXPECT_EQ(reg[i].domain, expected) << reg[i].name;
  }
  EXPECT_EQ(counts[0], 35u);
  EXPECT_EQ(counts[1], 45u);
  EXPECT_EQ(counts[2], 47u);
}

TEST(Registry, TopFeatureNamesResolveWithDomain) {
  for (const auto& [name, domain] : kPaperTopFeatures) {
    auto idx = find_feature(name);
    ASSERT_TRUE(idx.has_value()) << name;
    EXPECT_EQ(registry()[*idx].domain, domain) << name;
  }
  EXPECT_FALSE(find_feature("No Such Feature").has_value());
  EXPECT_THROW(feature_index("No Such Feature"), InvalidArgument);
}

TEST(Registry, ShippedCsvMatches) {
  std::ifstream in(std::string(ACBENCH_SOURCE_DIR) + "/data/feature_registry.csv", std::ios::binary);
  ASSERT_TRUE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), registry_csv());
  EXPECT_EQ(registry_csv().rfind("# registry_version=acbench-features-1.0\n", 0), 0u);
}

TEST(TimeFeatures, ConstantSignal) {
  auto f = time_features(AudioSignal(std::vector<double>(4000, 0.5), 16000.0));
  ASSERT_EQ(f.size(), 35u);
  EXPECT_EQ(at(f, "Zero Crossing Rate"), 0.0);
  EXPECT_DOUBLE_EQ(at(f, "Crest Factor"), 1.0);
  EXPECT_EQ(at(f, "Variance"), 0.0);
  EXPECT_EQ(at(f, "Skewness"), 0.0);
  EXPECT_EQ(at(f, "Kurtosis"), 0.0);
}

TEST(TimeFeatures, AlternatingSignalCrossesEverySample) {
  std::vector<double> s(2048);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i % 2 == 0 ? 1.0 : -1.0;
  auto f = time_features(AudioSignal(s, 16000.0));
  EXPECT_DOUBLE_EQ(at(f, "Zero Crossing Rate"), 1.0);
}

TEST(TimeFeatures, SineCrestFactorAndTemporalCentroid) {
  auto f = time_features(tone(1000.0, 1.0, 16000));
  EXPECT_NEAR(at(f, "Crest Factor"), std::numbers::sqrt2, 0.01 * std::numbers::sqrt2);
  // Stationary amplitude: centre of mass sits at the middle of the signal.
  EXPECT_NEAR(at(f, "Temporal Centroid"), 15999.0 / 2.0 / 16000.0, 1e-3);
  EXPECT_NEAR(at(f, "RMS Energy"), std::sqrt(0.5), 1e-6);
}

TEST(TimeFeatures, MomentsMatchDirectComputation) {
  auto x = gaussian(3000, 21);
  auto f = time_features(x);
  const auto s = x.samples();
  const double n = static_cast<double>(s.size());
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : s) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  EXPECT_NEAR(at(f, "Mean"), mean, 1e-12);
  EXPECT_NEAR(at(f, "Variance"), m2, 1e-12);
  EXPECT_NEAR(at(f, "Skewness"), m3 / std::pow(m2, 1.5), 1e-10);
  EXPECT_NEAR(at(f, "Kurtosis"), m4 / (m2 * m2), 1e-10);
  std::size_t changes = 0;
  for (std::size_t i = 1; i < s.size(); ++i) changes += (s[i] >= 0.0) != (s[i - 1] >= 0.0);
  EXPECT_NEAR(at(f, "Zero Crossing Rate"), static_cast<double>(changes) / (n - 1.0), 1e-12);
}

TEST(SpectralStats, PointMassAndSymmetry) {
  const double bin_hz = 10.0;
  std::vector<double> p(401, 0.0);
  p[100] = 3.0;
  EXPECT_DOUBLE_EQ(spectral_centroid(p, bin_hz), 1000.0);
  EXPECT_DOUBLE_EQ(spectral_rolloff(p, bin_hz), 1000.0);
  EXPECT_DOUBLE_EQ(spectral_bandwidth(p, bin_hz), 0.0);
  EXPECT_DOUBLE_EQ(dominant_frequency(p, bin_hz), 1000.0);

  std::vector<double> two(401, 0.0);
  two[10] = two[30] = 1.0;
  EXPECT_DOUBLE_EQ(spectral_centroid(two, bin_hz), 200.0);
  EXPECT_DOUBLE_EQ(spectral_bandwidth(two, bin_hz), 100.0);

  std::vector<double> zero(401, 0.0);
  EXPECT_EQ(spectral_centroid(zero, bin_hz), 0.0);
  EXPECT_EQ(spectral_bandwidth(zero, bin_hz), 0.0);
  EXPECT_EQ(spectral_rolloff(zero, bin_hz), 0.0);

  std::vector<double> flat(401, 2.0);
  EXPECT_NEAR(spectral_flatness(flat), 1.0, 1e-12);
  EXPECT_NEAR(spectral_entropy(flat), 1.0, 1e-12);
}

TEST(SpectralStats, OctaveRatiosSumToOne) {
  std::vector<double> p(257);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = 1.0 + std::sin(0.1 * static_cast<double>(k));
  auto r = octave_band_ratios(p);
  double sum = 0.0;
  for (double v : r) {
    EXPECT_GE(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(FreqFeatures, StationarySignalHasNoFlux) {
  // 500 Hz: 32-sample period divides the 256-sample hop.
  auto f = freq_features(tone(500.0, 1.0, 16000));
  ASSERT_EQ(f.size(), 45u);
  EXPECT_LT(f[feature_index("Spectral Flux") - kFrequencyOffset], 1e-6);
  EXPECT_NEAR(f[feature_index("Dominant Frequency") - kFrequencyOffset], 500.0, 16000.0 / 512.0);
}

TEST(TimeFreqFeatures, ZeroSignalIsAllZero) {
  auto f = timefreq_features(AudioSignal(std::vector<double>(8000, 0.0), 16000.0));
  ASSERT_EQ(f.size(), 47u);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f[i], 0.0) << registry()[kTimeFrequencyOffset + i].name;
}

TEST(TimeFreqFeatures, WaveletD4IsPassthrough) {
  auto x = gaussian(16000, 22);
  auto all = extract_all(x).values;
  EXPECT_EQ(all[feature_index("Wavelet energy (D4)")], dsp::dwt_energies(x).detail_energies[3]);
}

TEST(TimeFreqFeatures, StationaryCentroidTrajectoryIsFlat) {
  auto x = tone(1234.0, 0.8, 16000);
  auto f = extract_all(x).values;
  // Recompute the trajectory from the spectrogram.
  const auto cfg = FeatureConfig::for_sample_rate(16000.0);
  auto spec = dsp::stft(x, cfg.window_size, cfg.hop);
  std::vector<double> traj;
  for (std::size_t m = 0; m < spec.frames(); ++m) traj.push_back(spectral_centroid(spec.power.row(m), spec.bin_hz));
  double mean = 0.0;
  for (double v : traj) mean += v;
  mean /= static_cast<double>(traj.size());
  double var = 0.0;
  for (double v : traj) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(traj.size()));
  EXPECT_LT(sd, 1e-3 * mean);
  EXPECT_NEAR(f[feature_index("Centroid Trajectory Mean")], mean, 1e-9 * mean);
  EXPECT_LT(f[feature_index("Centroid Trajectory Std")], 1e-3 * f[feature_index("Centroid Trajectory Mean")]);
}

TEST(ExtractAll, LengthOrderAndDeterminism) {
  auto x = gaussian(16000, 23);
  auto a = extract_all(x);
  auto b = extract_all(x);
  ASSERT_EQ(a.values.size(), 127u);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.registry_version, "acbench-features-1.0");
  auto t = time_features(x), fr = freq_features(x), tf = timefreq_features(x);
  EXPECT_TRUE(std::equal(t.begin(), t.end(), a.values.begin()));
  EXPECT_TRUE(std::equal(fr.begin(), fr.end(), a.values.begin() + kFrequencyOffset));
  EXPECT_TRUE(std::equal(tf.begin(), tf.end(), a.values.begin() + kTimeFrequencyOffset));
}

TEST(ExtractAll, StressCorpusIsFinite) {
  std::vector<AudioSignal> corpus;
  corpus.emplace_back(std::vector<double>(16000, 0.0), 16000.0);
  corpus.emplace_back(std::vector<double>(16000, 0.3), 16000.0);
  corpus.emplace_back(std::vector<double>(16000, -1.0), 16000.0);
  std::vector<double> impulse(16000, 0.0);
  impulse[5000] = 1.0;
  corpus.emplace_back(impulse, 16000.0);
  std::vector<double> tiny(16000, 0.0);
  tiny[1] = 1e-300;
  corpus.emplace_back(tiny, 16000.0);
  corpus.emplace_back(std::vector<double>(512, 0.1), 16000.0);
  corpus.push_back(tone(7999.0, 1.0, 16000));
  synth::GeneratorConfig g;
  for (auto cls : synth::kFaultClasses) corpus.push_back(synth::generate_sample(cls, 42, g));

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto v = extract_all(corpus[i]).values;
    ASSERT_EQ(v.size(), 127u);
    for (std::size_t j = 0; j < v.size(); ++j) {
      ASSERT_TRUE(std::isfinite(v[j])) << "signal " << i << " feature " << registry()[j].name;
    }
  }
}

TEST(ExtractAll, AmplitudeInvariantEntriesSurviveNormalization) {
  synth::GeneratorConfig g;
  auto x = synth::generate_sample(synth::FaultClass::SevereFault, 7, g);
  auto raw = extract_all(x).values;
  auto norm = extract_all(signal::normalize_amplitude(x)).values;
  for (const auto& info : registry()) {
    if (info.scaling != Scaling::Invariant) continue;
    const double a = raw[info.id], b = norm[info.id];
    EXPECT_LE(std::abs(a - b), 1e-6 * std::max(1.0, std::abs(a))) << info.name;
  }
  // Dependent entries really move.
  EXPECT_NE(raw[feature_index("RMS Energy")], norm[feature_index("RMS Energy")]);
  EXPECT_NE(raw[feature_index("Peak Amplitude")], norm[feature_index("Peak Amplitude")]);
}

TEST(ExtractBatch, ThreadCountDoesNotChangeOutput) {
  std::vector<AudioSignal> signals;
  for (std::uint64_t s = 0; s < 6; ++s) signals.push_back(gaussian(4000, 30 + s));
  auto serial = extract_batch(signals, 1);
  auto parallel = extract_batch(signals, 3);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial.rows(), 6u);
  EXPECT_EQ(serial.cols(), 127u);
}

TEST(Standardize, UsesTrainingStatisticsOnly) {
  Dataset train, test;
  train.features = Matrix(2, 2);
  train.features(0, 0) = 1.0;
  train.features(1, 0) = 3.0;
  train.features(0, 1) = 5.0;
  train.features(1, 1) = 5.0;
  train.labels = {0, 1};
  test.features = Matrix(1, 2);
  test.features(0, 0) = 4.0;
  test.features(0, 1) = 7.0;
  test.labels = {0};
  auto out = standardize(train, test);
  // Column 0: mean 2, population sd 1. Column 1 is constant: scale 1.
  EXPECT_DOUBLE_EQ(out.train.features(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(out.train.features(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(out.train.features(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(out.train.features(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(out.apply_to.features(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(out.apply_to.features(0, 1), 2.0);
  EXPECT_EQ(out.apply_to.labels, test.labels);
}

TEST(Standardize, TrainColumnsHaveZeroMeanUnitSpread) {
  std::mt19937_64 rng(24);
  std::normal_distribution<double> d(5.0, 3.0);
  Dataset train;
  train.features = Matrix(50, 4);
  for (double& v : train.features.data()) v = d(rng);
  train.labels.assign(50, 0);
  auto out = standardize(train, train);
  for (std::size_t c = 0; c < 4; ++c) {
    double m = 0.0, s = 0.0;
    for (std::size_t r = 0; r < 50; ++r) m += out.train.features(r, c);
    m /= 50.0;
    for (std::size_t r = 0; r < 50; ++r) s += std::pow(out.train.features(r, c) - m, 2);
    EXPECT_NEAR(m, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(s / 50.0), 1.0, 1e-9);
  }
}

TEST(FeaturesCsv, RoundTrip) {
  Dataset d;
  for (std::uint64_t s = 0; s < 3; ++s) d.features.append_row(extract_all(gaussian(2048, 40 + s)).values);
  d.labels = {0, 1, 1};
  d.sources = {"a.wav", "b,with comma.wav", "c.wav"};
  std::stringstream buf;
  write_features_csv(buf, d);
  auto back = read_features_csv(buf);
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.sources, d.sources);
}
