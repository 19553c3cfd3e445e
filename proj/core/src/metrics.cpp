#include "acbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acbench/error.hpp"

namespace acbench::eval {

ConfusionMatrix::ConfusionMatrix(int classes)
    : classes_(classes), counts_(static_cast<std::size_t>(std::max(classes, 0) * std::max(classes, 0)), 0) {
  if (classes < 1) throw InvalidArgument("confusion matrix needs at least one class");
}

ConfusionMatrix::ConfusionMatrix(std::span<const int> truth, std::span<const int> predicted, int classes)
    : ConfusionMatrix(classes) {
  if (truth.size() != predicted.size()) throw InvalidArgument("truth and prediction lengths differ");
  for (std::size_t i = 0; i < truth.size(); ++i) add(truth[i], predicted[i]);
}

std::int64_t ConfusionMatrix::operator()(int truth, int predicted) const {
  return counts_[static_cast<std::size_t>(truth * classes_ + predicted)];
}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t count) {
  if (truth < 0 || truth >= classes_ || predicted < 0 || predicted >= classes_) {
    throw InvalidArgument("label outside confusion matrix");
  }
  if (count < 0) throw InvalidArgument("negative count");
  counts_[static_cast<std::size_t>(truth * classes_ + predicted)] += count;
  total_ += count;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (int c = 0; c < classes_; ++c) t += (*this)(c, c);
  return t;
}

namespace {

struct ClassCounts {
  double tp, fp, fn;
};

ClassCounts class_counts(const ConfusionMatrix& cm, int c) {
  ClassCounts k{static_cast<double>(cm(c, c)), 0.0, 0.0};
  for (int o = 0; o < cm.classes(); ++o) {
    if (o == c) continue;
    k.fp += static_cast<double>(cm(o, c));
    k.fn += static_cast<double>(cm(c, o));
  }
  return k;
}

double safe_div(double a, double b) { return b > 0.0 ? a / b : 0.0; }

}  // namespace

PerClassScores per_class_scores(const ConfusionMatrix& cm) {
  PerClassScores out;
  for (int c = 0; c < cm.classes(); ++c) {
    const auto k = class_counts(cm, c);
    const double p = safe_div(k.tp, k.tp + k.fp);
    const double r = safe_div(k.tp, k.tp + k.fn);
    out.precision.push_back(p);
    out.recall.push_back(r);
    out.f1.push_back(safe_div(2.0 * p * r, p + r));
  }
  return out;
}

std::vector<double> per_class_f1(const ConfusionMatrix& cm) { return per_class_scores(cm).f1; }

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("classification_metrics: empty confusion matrix");
  ClassificationMetrics m;
  m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
  const auto per = per_class_scores(cm);
  const auto n = static_cast<double>(cm.classes());
  m.precision = std::accumulate(per.precision.begin(), per.precision.end(), 0.0) / n;
  m.recall = std::accumulate(per.recall.begin(), per.recall.end(), 0.0) / n;
  m.f1 = std::accumulate(per.f1.begin(), per.f1.end(), 0.0) / n;
  return m;
}

double mcc_binary(double tp, double tn, double fp, double fn) {
  const double den = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  return den > 0.0 ? (tp * tn - fp * fn) / den : 0.0;
}

double mcc(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("mcc: empty confusion matrix");
  const int n = cm.classes();
  if (n == 2) {
    return mcc_binary(static_cast<double>(cm(1, 1)), static_cast<double>(cm(0, 0)),
                      static_cast<double>(cm(0, 1)), static_cast<double>(cm(1, 0)));
  }
  // Gorodkin's R_K: (c*s - sum p_k t_k) / sqrt((s^2 - sum p_k^2)(s^2 - sum t_k^2)).
  const auto s = static_cast<double>(cm.total());
  const auto c = static_cast<double>(cm.trace());
  double pt = 0.0, pp = 0.0, tt = 0.0;
  for (int k = 0; k < n; ++k) {
    double t = 0.0, p = 0.0;
    for (int o = 0; o < n; ++o) {
      t += static_cast<double>(cm(k, o));
      p += static_cast<double>(cm(o, k));
    }
    pt += p * t;
    pp += p * p;
    tt += t * t;
  }
  const double den = std::sqrt((s * s - pp) * (s * s - tt));
  return den > 0.0 ? (c * s - pt) / den : 0.0;
}

double binary_auc(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  if (scores.size() != positive.size()) throw InvalidArgument("auc: score and label lengths differ");
  const auto pos = static_cast<double>(std::count(positive.begin(), positive.end(), std::uint8_t{1}));
  const double neg = static_cast<double>(positive.size()) - pos;
  if (pos == 0.0 || neg == 0.0) throw InvalidArgument("auc: need both positives and negatives");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Lower the threshold one distinct score at a time.
  double area = 0.0;
  double tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double prev_tpr = tp / pos;
    const double prev_fpr = fp / neg;
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) (positive[order[i]] != 0 ? tp : fp) += 1.0;
    area += 0.5 * (tp / pos + prev_tpr) * (fp / neg - prev_fpr);
  }
  return area;
}

AucResult auc_roc(const Matrix& scores, std::span<const int> truth) {
  if (scores.rows() != truth.size()) throw InvalidArgument("auc: score rows and labels differ");
  AucResult out;
  std::vector<double> column(scores.rows());
  std::vector<std::uint8_t> pos_buf(scores.rows());
  for (std::size_t c = 0; c < scores.cols(); ++c) {
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < scores.rows(); ++i) {
      column[i] = scores(i, c);
      pos_buf[i] = truth[i] == static_cast<int>(c) ? 1 : 0;
      (pos_buf[i] != 0 ? any_pos : any_neg) = true;
    }
    if (!any_pos || !any_neg) {
      out.skipped.push_back(static_cast<int>(c));
      out.per_class.push_back(std::nan(""));
      continue;
    }
    out.per_class.push_back(binary_auc(column, pos_buf));
  }
  double sum = 0.0;
  std::size_t used = 0;
  for (double a : out.per_class) {
    if (std::isnan(a)) continue;
    sum += a;
    ++used;
  }
  if (used == 0) throw InvalidArgument("auc: no class has both positives and negatives");
  out.auc = sum / static_cast<double>(used);
  return out;
}

}  // namespace acbench::eval
