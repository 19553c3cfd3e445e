#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "acbench/cv.hpp"
#include "acbench/error.hpp"
#include "acbench/metrics.hpp"
#include "acbench/stats.hpp"

using namespace acbench;
using namespace acbench::eval;

namespace {

ConfusionMatrix binary_cm(long tp, long fp, long fn, long tn) {
  ConfusionMatrix cm(2);
  cm.add(1, 1, tp);
  cm.add(0, 1, fp);
  cm.add(1, 0, fn);
  cm.add(0, 0, tn);
  return cm;
}

// Pearson correlation between one-hot truth and one-hot prediction, summed
// over classes; the covariance definition of the multiclass MCC.
double mcc_by_correlation(const std::vector<int>& t, const std::vector<int>& p, int classes) {
  const double n = static_cast<double>(t.size());
  double cov_tp = 0.0, cov_tt = 0.0, cov_pp = 0.0;
  for (int c = 0; c < classes; ++c) {
    double mt = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      mt += (t[i] == c) / n;
      mp += (p[i] == c) / n;
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double a = (t[i] == c) - mt;
      const double b = (p[i] == c) - mp;
      cov_tp += a * b;
      cov_tt += a * a;
      cov_pp += b * b;
    }
  }
  if (cov_tt == 0.0 || cov_pp == 0.0) return 0.0;
  return cov_tp / std::sqrt(cov_tt * cov_pp);
}

// Probability that a random positive outscores a random negative, ties count half.
double auc_by_pairs(const std::vector<double>& s, const std::vector<std::uint8_t>& pos) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!pos[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (pos[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST(ConfusionMatrix, CountsAndValidation) {
  const std::vector<int> t{0, 1, 2, 2, 1};
  const std::vector<int> p{0, 2, 2, 1, 1};
  ConfusionMatrix cm(t, p, 3);
  EXPECT_EQ(cm.total(), 5);
  EXPECT_EQ(cm.trace(), 3);
  EXPECT_EQ(cm(1, 2), 1);
  EXPECT_EQ(cm(2, 1), 1);
  EXPECT_THROW(ConfusionMatrix(t, std::vector<int>{0, 1}, 3), InvalidArgument);
  EXPECT_THROW(ConfusionMatrix(t, p, 2), InvalidArgument);
  EXPECT_THROW(classification_metrics(ConfusionMatrix(3)), InvalidArgument);
}

TEST(Metrics, PerfectDiagonalScoresOne) {
  ConfusionMatrix cm(5);
  for (int c = 0; c < 5; ++c) cm.add(c, c, 10 + c);
  auto m = classification_metrics(cm);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 1.0);
  EXPECT_DOUBLE_EQ(mcc(cm), 1.0);
}

TEST(Metrics, BinaryWorkedExample) {
  auto cm = binary_cm(50, 10, 5, 35);
  auto per = per_class_scores(cm);
  // 50/60, 50/55 and their harmonic mean 100/115.
  EXPECT_NEAR(per.precision[1], 0.8333, 1e-4);
  EXPECT_NEAR(per.recall[1], 0.9091, 1e-4);
  EXPECT_NEAR(per.f1[1], 0.8696, 1e-4);
  EXPECT_DOUBLE_EQ(per.f1[1], 100.0 / 115.0);
  // Class 0: 35/40 and 35/45.
  EXPECT_DOUBLE_EQ(per.precision[0], 35.0 / 40.0);
  EXPECT_DOUBLE_EQ(per.recall[0], 35.0 / 45.0);
  auto m = classification_metrics(cm);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.85);
  EXPECT_NEAR(m.precision, (50.0 / 60.0 + 35.0 / 40.0) / 2.0, 1e-15);
  EXPECT_NEAR(m.recall, (50.0 / 55.0 + 35.0 / 45.0) / 2.0, 1e-15);
  EXPECT_EQ(per_class_f1(cm), per.f1);
}

TEST(Metrics, NeverPredictedClassContributesZero) {
  ConfusionMatrix cm(3);
  cm.add(0, 0, 4);
  cm.add(1, 1, 4);
  cm.add(2, 1, 2);
  auto per = per_class_scores(cm);
  EXPECT_EQ(per.precision[2], 0.0);
  EXPECT_EQ(per.recall[2], 0.0);
  EXPECT_EQ(per.f1[2], 0.0);
  auto m = classification_metrics(cm);
  EXPECT_FALSE(std::isnan(m.precision));
  EXPECT_NEAR(m.precision, (1.0 + 4.0 / 6.0 + 0.0) / 3.0, 1e-15);
}

TEST(Metrics, MacroF1MatchesCountsFromLabels) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> label(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> t(40), p(40);
    for (auto& v : t) v = label(rng);
    for (auto& v : p) v = label(rng);
    double f1 = 0.0;
    for (int c = 0; c < 4; ++c) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        tp += t[i] == c && p[i] == c;
        fp += t[i] != c && p[i] == c;
        fn += t[i] == c && p[i] != c;
      }
      if (tp > 0) f1 += 2 * tp / (2 * tp + fp + fn);
    }
    EXPECT_NEAR(classification_metrics(ConfusionMatrix(t, p, 4)).f1, f1 / 4.0, 1e-12);
  }
}

TEST(Mcc, BinaryExamples) {
  EXPECT_DOUBLE_EQ(mcc_binary(50, 50, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(mcc_binary(0, 0, 50, 50), -1.0);
  // (45*40 - 10*5) / sqrt(55 * 50 * 50 * 45)
  EXPECT_NEAR(mcc_binary(45, 40, 10, 5), 0.7035, 1e-4);
  EXPECT_EQ(mcc_binary(10, 0, 0, 0), 0.0);
}

TEST(Mcc, TwoClassMatrixMatchesBinaryFormula) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> count(0, 60);
  for (int trial = 0; trial < 200; ++trial) {
    const long tp = count(rng), fp = count(rng), fn = count(rng), tn = count(rng);
    if (tp + fp + fn + tn == 0) continue;
    EXPECT_NEAR(mcc(binary_cm(tp, fp, fn, tn)), mcc_binary(tp, tn, fp, fn), 1e-12);
  }
}

TEST(Mcc, MulticlassMatchesCorrelationDefinition) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> label(0, 4);
  std::bernoulli_distribution keep(0.6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> t(60), p(60);
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = label(rng);
      p[i] = keep(rng) ? t[i] : label(rng);
    }
    EXPECT_NEAR(mcc(ConfusionMatrix(t, p, 5)), mcc_by_correlation(t, p, 5), 1e-12);
  }
}

TEST(Auc, PerfectAndTied) {
  const std::vector<double> s{0.1, 0.2, 0.8, 0.9};
  const std::vector<std::uint8_t> pos{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(binary_auc(s, pos), 1.0);
  const std::vector<std::uint8_t> rev{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(binary_auc(s, rev), 0.0);
  const std::vector<double> tied(4, 0.5);
  EXPECT_DOUBLE_EQ(binary_auc(tied, pos), 0.5);
}

TEST(Auc, MatchesPairwiseConcordance) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> size(2, 30);
  std::uniform_int_distribution<int> level(0, 6);  // coarse scores force ties
  std::bernoulli_distribution coin(0.5);
  int checked = 0;
  while (checked < 200) {
    const int n = size(rng);
    std::vector<double> s(n);
    std::vector<std::uint8_t> pos(n);
    for (int i = 0; i < n; ++i) {
      s[i] = level(rng) / 6.0;
      pos[i] = coin(rng);
    }
    const auto np = std::count(pos.begin(), pos.end(), 1);
    if (np == 0 || np == n) continue;
    EXPECT_NEAR(binary_auc(s, pos), auc_by_pairs(s, pos), 1e-9);
    ++checked;
  }
}

TEST(Auc, OneVsRestSkipsDegenerateClasses) {
  Matrix scores(4, 3);
  const std::vector<int> truth{0, 0, 1, 1};
  const double rows[4][3] = {{0.9, 0.1, 0.0}, {0.7, 0.2, 0.1}, {0.2, 0.7, 0.1}, {0.4, 0.5, 0.1}};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t c = 0; c < 3; ++c) scores(i, c) = rows[i][c];
  }
  auto r = auc_roc(scores, truth);
  EXPECT_EQ(r.skipped, std::vector<int>{2});
  ASSERT_EQ(r.per_class.size(), 3u);
  EXPECT_TRUE(std::isnan(r.per_class[2]));
  EXPECT_DOUBLE_EQ(r.per_class[0], 1.0);
  EXPECT_DOUBLE_EQ(r.per_class[1], 1.0);
  EXPECT_DOUBLE_EQ(r.auc, 1.0);
  EXPECT_THROW(auc_roc(scores, std::vector<int>{0, 0}), InvalidArgument);
  EXPECT_THROW(auc_roc(Matrix(2, 2, 0.5), std::vector<int>{1, 1}), InvalidArgument);
}

TEST(Metrics, InvariantToSamplePermutation) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> label(0, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 80;
  std::vector<int> t(n), p(n);
  Matrix s(n, 5);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = label(rng);
    p[i] = label(rng);
    for (std::size_t c = 0; c < 5; ++c) s(i, c) = u(rng);
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> t2(n), p2(n);
  Matrix s2(n, 5);
  for (std::size_t i = 0; i < n; ++i) {
    t2[i] = t[perm[i]];
    p2[i] = p[perm[i]];
    for (std::size_t c = 0; c < 5; ++c) s2(i, c) = s(perm[i], c);
  }
  ConfusionMatrix a(t, p, 5), b(t2, p2, 5);
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(mcc(a), mcc(b));
  EXPECT_NEAR(auc_roc(s, t).auc, auc_roc(s2, t2).auc, 1e-12);
}

TEST(StratifiedKFold, BalancedFolds) {
  std::vector<int> y;
  for (int c = 0; c < 5; ++c) y.insert(y.end(), 20, c);
  auto plan = stratified_kfold(y, 5, 42);
  for (int k = 0; k < 5; ++k) {
    auto test = plan.test_indices(k);
    ASSERT_EQ(test.size(), 20u);
    std::array<int, 5> per{};
    for (auto i : test) ++per[y[i]];
    for (int v : per) EXPECT_EQ(v, 4);
    auto train = plan.train_indices(k);
    EXPECT_EQ(train.size(), 80u);
    std::set<std::size_t> seen(train.begin(), train.end());
    for (auto i : test) EXPECT_EQ(seen.count(i), 0u);
  }
  EXPECT_EQ(plan.pool_indices().size(), 100u);
}

TEST(StratifiedKFold, UnevenClassesWithinOne) {
  std::vector<int> y;
  const int sizes[] = {13, 7, 22, 9};
  for (int c = 0; c < 4; ++c) y.insert(y.end(), sizes[c], c);
  auto plan = stratified_kfold(y, 5, 1);
  std::size_t total = 0;
  for (int c = 0; c < 4; ++c) {
    for (int k = 0; k < 5; ++k) {
      int n = 0;
      for (auto i : plan.test_indices(k)) n += y[i] == c;
      EXPECT_LE(std::abs(n * 5 - sizes[c]), 5) << "class " << c << " fold " << k;
    }
  }
  for (int k = 0; k < 5; ++k) total += plan.test_indices(k).size();
  EXPECT_EQ(total, y.size());
}

TEST(StratifiedKFold, SeededAndRejectsTinyClasses) {
  std::vector<int> y;
  for (int c = 0; c < 3; ++c) y.insert(y.end(), 10, c);
  EXPECT_EQ(stratified_kfold(y, 5, 7), stratified_kfold(y, 5, 7));
  EXPECT_NE(stratified_kfold(y, 5, 7).fold, stratified_kfold(y, 5, 8).fold);
  y.push_back(3);
  EXPECT_THROW(stratified_kfold(y, 5, 7), InvalidArgument);
  EXPECT_THROW(stratified_kfold(std::vector<int>{0, 1}, 1, 7), InvalidArgument);
}

TEST(StratifiedKFold, HoldoutAndValidationAreDisjoint) {
  std::vector<int> y;
  for (int c = 0; c < 5; ++c) y.insert(y.end(), 100, c);
  auto plan = stratified_kfold(y, 5, 3, SplitOptions{0.2, 0.1});
  auto hold = plan.holdout_indices();
  auto val = plan.validation_indices();
  auto pool = plan.pool_indices();
  EXPECT_EQ(hold.size(), 100u);
  EXPECT_EQ(val.size(), 50u);
  EXPECT_EQ(pool.size(), 350u);
  std::set<std::size_t> all;
  for (auto* v : {&hold, &val, &pool}) all.insert(v->begin(), v->end());
  EXPECT_EQ(all.size(), 500u);
  for (int c = 0; c < 5; ++c) {
    EXPECT_EQ(std::count_if(hold.begin(), hold.end(), [&](std::size_t i) { return y[i] == c; }), 20);
  }
  EXPECT_THROW(stratified_kfold(y, 5, 3, SplitOptions{0.6, 0.4}), InvalidArgument);
}

TEST(ChiSquare, KnownValues) {
  EXPECT_DOUBLE_EQ(chi_square_sf(0.0, 1), 1.0);
  EXPECT_NEAR(chi_square_sf(3.841, 1), 0.05, 1e-3);
  EXPECT_NEAR(chi_square_sf(5.991, 2), 0.05, 1e-3);
  for (double x : {0.1, 1.0, 4.0, 17.0, 60.0}) EXPECT_NEAR(chi_square_sf(x, 2), std::exp(-x / 2.0), 1e-12);
}

TEST(ChiSquare, MatchesNumericalIntegration) {
  for (int k : {1, 3, 4, 7}) {
    const double half = k / 2.0;
    auto pdf = [&](double t) {
      if (t <= 0.0) return 0.0;
      return std::exp((half - 1.0) * std::log(t) - t / 2.0 - half * std::log(2.0) - std::lgamma(half));
    };
    for (double x : {0.5, 2.0, 6.0, 15.0}) {
      // Tail integral truncated 200 units out.
      const double tail = simpson(pdf, x, x + 200.0, 200000);
      EXPECT_NEAR(chi_square_sf(x, k), tail, 1e-7) << "k=" << k << " x=" << x;
    }
  }
}

TEST(McNemar, Examples) {
  auto even = mcnemar_counts(10, 10);
  EXPECT_DOUBLE_EQ(even.chi2, 0.05);
  auto lopsided = mcnemar_counts(20, 0);
  EXPECT_DOUBLE_EQ(lopsided.chi2, 18.05);
  EXPECT_LT(lopsided.p, 0.001);
  auto swapped = mcnemar_counts(0, 20);
  EXPECT_EQ(swapped.chi2, lopsided.chi2);
  EXPECT_EQ(swapped.p, lopsided.p);
  EXPECT_THROW(mcnemar_counts(-1, 2), InvalidArgument);
}

TEST(McNemar, FromCorrectnessVectors) {
  const std::vector<std::uint8_t> a{1, 1, 0, 0, 1, 1, 0};
  const std::vector<std::uint8_t> b{1, 0, 1, 0, 0, 0, 0};
  auto r = mcnemar(a, b);
  EXPECT_EQ(r.b, 3);
  EXPECT_EQ(r.c, 1);
  EXPECT_DOUBLE_EQ(r.chi2, 0.25);
  auto same = mcnemar(a, a);
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.chi2, 0.0);
  EXPECT_EQ(same.p, 1.0);
  EXPECT_THROW(mcnemar(a, std::vector<std::uint8_t>{1}), InvalidArgument);
}

TEST(Friedman, PerfectOrderingAndTies) {
  Matrix perf(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    perf(i, 0) = 0.9;
    perf(i, 1) = 0.8;
    perf(i, 2) = 0.7;
  }
  // 12*3 / (3*4) * (1 + 4 + 9 - 3*16/4) = 3 * 2.
  auto r = friedman(perf);
  EXPECT_NEAR(r.chi2, 6.0, 1e-12);
  EXPECT_EQ(r.avg_ranks, (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_NEAR(r.p, std::exp(-3.0), 1e-12);

  auto tied = friedman(Matrix(4, 3, 0.5));
  EXPECT_NEAR(tied.chi2, 0.0, 1e-12);
  EXPECT_EQ(tied.avg_ranks, (std::vector<double>{2.0, 2.0, 2.0}));
}

TEST(Friedman, RanksShareTies) {
  Matrix perf(1, 4);
  perf(0, 0) = 0.5;
  perf(0, 1) = 0.9;
  perf(0, 2) = 0.5;
  perf(0, 3) = 0.1;
  auto ranks = rank_rows(perf);
  EXPECT_EQ(ranks(0, 1), 1.0);
  EXPECT_EQ(ranks(0, 0), 2.5);
  EXPECT_EQ(ranks(0, 2), 2.5);
  EXPECT_EQ(ranks(0, 3), 4.0);
}

TEST(Nemenyi, CriticalDifference) {
  // q = 2.850 for six algorithms at alpha 0.05.
  EXPECT_NEAR(nemenyi_cd(2.850, 6, 25), 2.850 * std::sqrt(42.0 / 150.0), 1e-12);
  EXPECT_THROW(nemenyi_cd(2.85, 1, 10), InvalidArgument);
}
