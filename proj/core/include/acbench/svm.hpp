#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "acbench/classifier.hpp"

namespace acbench::learn {

enum class Kernel { Linear, Rbf, Poly };

std::string_view to_string(Kernel k);
Kernel parse_kernel(std::string_view text);

struct SvmParams {
  Kernel kernel = Kernel::Rbf;
  double C = 10.0;
  /// Kernel coefficient; 0 selects 1 / n_features.
  double gamma = 0.0;
  /// Independent term r of the polynomial kernel.
  double coef0 = 0.0;
  int degree = 3;
  /// KKT tolerance.
  double tol = 1e-3;
  int max_passes = 10000;
  std::uint64_t seed = 0;
};

/// Kernel with all coefficients resolved.
struct KernelFunction {
  Kernel kind = Kernel::Rbf;
  double gamma = 1.0;
  double coef0 = 0.0;
  int degree = 3;

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

struct SmoDiagnostics {
  bool converged = false;
  int passes = 0;
  double max_kkt_violation = 0.0;
  std::size_t updates = 0;
};

struct SmoSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  SmoDiagnostics diagnostics;
};

/// Called with the dual variables after every accepted pair update.
using SmoObserver = std::function<void(std::span<const double> alpha)>;

/// Simplified SMO on a precomputed kernel matrix for labels in {-1, +1}.
/// The second index of each pair is drawn at random. Stops when a full pass
/// finds no sample violating the KKT conditions by more than `tol`, or after
/// `max_passes` passes (diagnostics.converged = false).
SmoSolution smo_solve(const Matrix& gram, std::span<const int> y_pm1, double C, double tol,
                      int max_passes, std::uint64_t seed, const SmoObserver& observer = {});

/// One-vs-one machine separating `positive` (+1) from `negative` (-1).
struct BinarySvm {
  int positive = 0;
  int negative = 1;
  Matrix support;
  /// alpha_i * y_i for each support vector.
  std::vector<double> coef;
  double bias = 0.0;
  SmoDiagnostics diagnostics;

  double decision(const KernelFunction& k, std::span<const double> x) const;
};

class SvmModel final : public Classifier {
 public:
  SvmModel(std::vector<BinarySvm> machines, KernelFunction kernel, int class_count, double C);

  ModelKind kind() const noexcept override { return ModelKind::SVM; }
  int class_count() const noexcept override { return class_count_; }
  /// One-vs-one vote shares.
  std::vector<double> predict_proba(std::span<const double> x) const override;
  void save_body(ModelWriter& out) const override;
  static std::shared_ptr<const SvmModel> load(ModelReader& in, int class_count);

  const std::vector<BinarySvm>& machines() const noexcept { return machines_; }
  const KernelFunction& kernel() const noexcept { return kernel_; }

 private:
  std::vector<BinarySvm> machines_;
  KernelFunction kernel_;
  int class_count_;
  double C_;
};

/// Trains one machine per class pair present in `y`. Throws ConvergenceError
/// with the offending pair and its KKT residual if any machine fails to
/// converge within max_passes.
std::shared_ptr<const SvmModel> svm_train(const Matrix& x, std::span<const int> y,
                                          const SvmParams& params, int class_count = 0,
                                          const SmoObserver& observer = {});

}  // namespace acbench::learn
