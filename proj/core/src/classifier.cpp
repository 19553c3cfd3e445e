#include "acbench/classifier.hpp"

#include <algorithm>
#include <string>

#include "acbench/error.hpp"

namespace acbench::learn {

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::KNN:
      return "knn";
    case ModelKind::SVM:
      return "svm";
    case ModelKind::RF:
      return "rf";
    case ModelKind::GBT:
      return "gbt";
    case ModelKind::MLP:
      return "mlp";
    case ModelKind::Ensemble:
      return "ensemble";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  for (auto k : {ModelKind::KNN, ModelKind::SVM, ModelKind::RF, ModelKind::GBT, ModelKind::MLP,
                 ModelKind::Ensemble}) {
    if (to_string(k) == text) return k;
  }
  throw InvalidArgument("unknown model kind '" + std::string(text) + "'");
}

int argmax(std::span<const double> p) noexcept {
  int best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

int Classifier::predict(std::span<const double> x) const { return argmax(predict_proba(x)); }

Matrix Classifier::predict_proba(const Matrix& x) const {
  Matrix out(x.rows(), static_cast<std::size_t>(class_count()));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto p = predict_proba(x.row(r));
    std::copy(p.begin(), p.end(), out.row(r).begin());
  }
  return out;
}

std::vector<int> Classifier::predict(const Matrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict(x.row(r));
  return out;
}

int infer_class_count(std::span<const int> y) {
  if (y.empty()) throw InvalidArgument("no labels");
  const int hi = *std::max_element(y.begin(), y.end());
  const int lo = *std::min_element(y.begin(), y.end());
  if (lo < 0) throw InvalidArgument("labels must be non-negative");
  return hi + 1;
}

void check_training_data(const Matrix& x, std::span<const int> y, int class_count) {
  if (x.rows() == 0) throw InvalidArgument("training set is empty");
  if (x.rows() != y.size()) {
    throw InvalidArgument("feature rows (" + std::to_string(x.rows()) + ") and labels (" +
                          std::to_string(y.size()) + ") differ");
  }
  if (class_count < 1) throw InvalidArgument("class count must be positive");
  for (int label : y) {
    if (label < 0 || label >= class_count) {
      throw InvalidArgument("label " + std::to_string(label) + " outside [0, " +
                            std::to_string(class_count) + ")");
    }
  }
}

}  // namespace acbench::learn
