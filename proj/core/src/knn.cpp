#include "acbench/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acbench/error.hpp"
#include "acbench/model_io.hpp"

namespace acbench::learn {

std::string_view to_string(Distance d) {
  switch (d) {
    case Distance::Euclidean:
      return "euclidean";
    case Distance::Manhattan:
      return "manhattan";
    case Distance::Cosine:
      return "cosine";
  }
  return "?";
}

Distance parse_distance(std::string_view text) {
  for (auto d : {Distance::Euclidean, Distance::Manhattan, Distance::Cosine}) {
    if (to_string(d) == text) return d;
  }
  throw InvalidArgument("unknown distance metric '" + std::string(text) + "'");
}

double distance(Distance metric, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("distance: dimension mismatch");
  switch (metric) {
    case Distance::Euclidean: {
      double acc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(acc);
    }
    case Distance::Manhattan: {
      double acc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    }
    case Distance::Cosine: {
      double dot = 0.0;
      double na = 0.0;
      double nb = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      if (na == 0.0 || nb == 0.0) return 1.0;
      return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
    }
  }
  return 0.0;
}

KnnModel::KnnModel(Matrix x, std::vector<int> y, int class_count, KnnParams params)
    : x_(std::move(x)), y_(std::move(y)), class_count_(class_count), params_(params) {}

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> x) const {
  std::vector<std::pair<double, std::size_t>> d(x_.rows());
  for (std::size_t i = 0; i < x_.rows(); ++i) d[i] = {distance(params_.metric, x, x_.row(i)), i};
  const auto k = static_cast<std::size_t>(params_.k);
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
  return out;
}

std::vector<double> KnnModel::predict_proba(std::span<const double> x) const {
  if (x.size() != x_.cols()) throw InvalidArgument("knn: feature count mismatch");
  std::vector<double> p(static_cast<std::size_t>(class_count_), 0.0);
  const auto nn = neighbors(x);
  for (std::size_t i : nn) p[static_cast<std::size_t>(y_[i])] += 1.0;
  for (double& v : p) v /= static_cast<double>(nn.size());
  return p;
}

void KnnModel::save_body(ModelWriter& out) const {
  out.field("k", static_cast<std::int64_t>(params_.k));
  out.field("metric", to_string(params_.metric));
  out.matrix("x", x_);
  out.vector("y", std::span<const int>(y_));
}

std::shared_ptr<const KnnModel> KnnModel::load(ModelReader& in, int class_count) {
  KnnParams p;
  p.k = static_cast<int>(in.field_int("k"));
  p.metric = parse_distance(in.field_string("metric"));
  Matrix x = in.matrix("x");
  std::vector<int> y = in.vector_int("y");
  if (y.size() != x.rows() || p.k < 1 || static_cast<std::size_t>(p.k) > y.size()) {
    throw FormatError("knn model: inconsistent body");
  }
  return std::make_shared<KnnModel>(std::move(x), std::move(y), class_count, p);
}

std::shared_ptr<const KnnModel> knn_train(const Matrix& x, std::span<const int> y,
                                          const KnnParams& params, int class_count) {
  if (class_count == 0) class_count = infer_class_count(y);
  check_training_data(x, y, class_count);
  if (params.k < 1) throw InvalidArgument("knn: k must be >= 1");
  if (static_cast<std::size_t>(params.k) > x.rows()) {
    throw InvalidArgument("knn: k = " + std::to_string(params.k) + " exceeds the " +
                          std::to_string(x.rows()) + " training samples");
  }
  return std::make_shared<KnnModel>(x, std::vector<int>(y.begin(), y.end()), class_count, params);
}

}  // namespace acbench::learn
