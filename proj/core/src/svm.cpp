#include "acbench/svm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "acbench/error.hpp"
#include "acbench/model_io.hpp"
#include "acbench/random.hpp"

namespace acbench::learn {

std::string_view to_string(Kernel k) {
  switch (k) {
    case Kernel::Linear:
      return "linear";
    case Kernel::Rbf:
      return "rbf";
    case Kernel::Poly:
      return "poly";
  }
  return "?";
}

Kernel parse_kernel(std::string_view text) {
  for (auto k : {Kernel::Linear, Kernel::Rbf, Kernel::Poly}) {
    if (to_string(k) == text) return k;
  }
  throw InvalidArgument("unknown kernel '" + std::string(text) + "'");
}

double KernelFunction::operator()(std::span<const double> a, std::span<const double> b) const {
  switch (kind) {
    case Kernel::Linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      return dot;
    }
    case Kernel::Rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
      return std::exp(-gamma * d2);
    }
    case Kernel::Poly: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      return std::pow(gamma * dot + coef0, degree);
    }
  }
  return 0.0;
}

SmoSolution smo_solve(const Matrix& gram, std::span<const int> y, double C, double tol,
                      int max_passes, std::uint64_t seed, const SmoObserver& observer) {
  const std::size_t n = y.size();
  if (gram.rows() != n || gram.cols() != n) throw InvalidArgument("smo: kernel matrix shape mismatch");
  if (!(C > 0.0)) throw InvalidArgument("smo: C must be positive");
  if (n < 2) throw InvalidArgument("smo: need at least two samples");

  SmoSolution sol;
  auto& alpha = sol.alpha;
  alpha.assign(n, 0.0);
  double& b = sol.bias;
  // Error cache E_i = f(x_i) - y_i with f = sum alpha y K + b.
  std::vector<double> err(n);
  for (std::size_t i = 0; i < n; ++i) err[i] = -static_cast<double>(y[i]);

  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 2);

  const auto violation = [&](std::size_t i) {
    const double r = static_cast<double>(y[i]) * err[i];
    double v = 0.0;
    if (alpha[i] < C) v = std::max(v, -r);
    if (alpha[i] > 0.0) v = std::max(v, r);
    return v;
  };

  // Rounding can leave a multiplier a hair away from a bound, where it reads
  // as a KKT violation no pair step can repair.
  const double eps = 1e-12 * C;
  const auto snap = [&](double a) { return a < eps ? 0.0 : (a > C - eps ? C : a); };

  auto& diag = sol.diagnostics;
  for (diag.passes = 0; diag.passes < max_passes; ++diag.passes) {
    std::size_t violators = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (violation(i) <= tol) continue;
      ++violators;
      std::size_t j = pick(rng);
      if (j >= i) ++j;

      const double yi = y[i];
      const double yj = y[j];
      const double ai_old = alpha[i];
      const double aj_old = alpha[j];
      double lo = 0.0;
      double hi = 0.0;
      if (y[i] != y[j]) {
        lo = std::max(0.0, aj_old - ai_old);
        hi = std::min(C, C + aj_old - ai_old);
      } else {
        lo = std::max(0.0, ai_old + aj_old - C);
        hi = std::min(C, ai_old + aj_old);
      }
      if (hi - lo <= 0.0) continue;
      const double eta = 2.0 * gram(i, j) - gram(i, i) - gram(j, j);
      if (eta >= 0.0) continue;

      double aj = snap(std::clamp(aj_old - yj * (err[i] - err[j]) / eta, lo, hi));
      if (std::abs(aj - aj_old) < 1e-12 * C) continue;
      const double ai = snap(std::clamp(ai_old + yi * yj * (aj_old - aj), 0.0, C));

      const double di = ai - ai_old;
      const double dj = aj - aj_old;
      const double b1 = b - err[i] - yi * di * gram(i, i) - yj * dj * gram(i, j);
      const double b2 = b - err[j] - yi * di * gram(i, j) - yj * dj * gram(j, j);
      double b_new = 0.0;
      if (ai > 0.0 && ai < C) {
        b_new = b1;
      } else if (aj > 0.0 && aj < C) {
        b_new = b2;
      } else {
        b_new = 0.5 * (b1 + b2);
      }
      const double db = b_new - b;
      alpha[i] = ai;
      alpha[j] = aj;
      b = b_new;
      for (std::size_t k = 0; k < n; ++k) {
        err[k] += yi * di * gram(i, k) + yj * dj * gram(j, k) + db;
      }
      ++diag.updates;
      if (observer) observer(alpha);
    }
    if (violators == 0) {
      diag.converged = true;
      ++diag.passes;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) diag.max_kkt_violation = std::max(diag.max_kkt_violation, violation(i));
  return sol;
}

double BinarySvm::decision(const KernelFunction& k, std::span<const double> x) const {
  double f = bias;
  for (std::size_t s = 0; s < support.rows(); ++s) f += coef[s] * k(support.row(s), x);
  return f;
}

SvmModel::SvmModel(std::vector<BinarySvm> machines, KernelFunction kernel, int class_count, double C)
    : machines_(std::move(machines)), kernel_(kernel), class_count_(class_count), C_(C) {}

std::vector<double> SvmModel::predict_proba(std::span<const double> x) const {
  std::vector<double> votes(static_cast<std::size_t>(class_count_), 0.0);
  if (machines_.empty()) {
    // Single-class training data: every vote goes to that class.
    votes[0] = 1.0;
    return votes;
  }
  for (const auto& m : machines_) {
    const int winner = m.decision(kernel_, x) >= 0.0 ? m.positive : m.negative;
    votes[static_cast<std::size_t>(winner)] += 1.0;
  }
  for (double& v : votes) v /= static_cast<double>(machines_.size());
  return votes;
}

void SvmModel::save_body(ModelWriter& out) const {
  out.field("kernel", to_string(kernel_.kind));
  out.field("gamma", kernel_.gamma);
  out.field("coef0", kernel_.coef0);
  out.field("degree", static_cast<std::int64_t>(kernel_.degree));
  out.field("C", C_);
  out.field("machines", static_cast<std::int64_t>(machines_.size()));
  for (const auto& m : machines_) {
    out.key("pair");
    out.value(static_cast<std::int64_t>(m.positive));
    out.value(static_cast<std::int64_t>(m.negative));
    out.newline();
    out.field("bias", m.bias);
    out.vector("coef", m.coef);
    out.matrix("support", m.support);
  }
}

std::shared_ptr<const SvmModel> SvmModel::load(ModelReader& in, int class_count) {
  KernelFunction k;
  k.kind = parse_kernel(in.field_string("kernel"));
  k.gamma = in.field_real("gamma");
  k.coef0 = in.field_real("coef0");
  k.degree = static_cast<int>(in.field_int("degree"));
  const double C = in.field_real("C");
  const auto count = in.field_int("machines");
  std::vector<BinarySvm> machines(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (auto& m : machines) {
    in.expect("pair");
    m.positive = static_cast<int>(in.integer());
    m.negative = static_cast<int>(in.integer());
    m.bias = in.field_real("bias");
    m.coef = in.vector_real("coef");
    m.support = in.matrix("support");
    if (m.coef.size() != m.support.rows() || m.positive < 0 || m.negative < 0 ||
        m.positive >= class_count || m.negative >= class_count) {
      throw FormatError("svm model: inconsistent machine");
    }
    m.diagnostics.converged = true;
  }
  return std::make_shared<SvmModel>(std::move(machines), k, class_count, C);
}

std::shared_ptr<const SvmModel> svm_train(const Matrix& x, std::span<const int> y,
                                          const SvmParams& params, int class_count,
                                          const SmoObserver& observer) {
  if (class_count == 0) class_count = infer_class_count(y);
  check_training_data(x, y, class_count);
  if (!(params.C > 0.0)) throw InvalidArgument("svm: C must be positive");
  if (params.gamma < 0.0) throw InvalidArgument("svm: gamma must be non-negative");
  if (params.kernel == Kernel::Poly && params.degree < 1) throw InvalidArgument("svm: degree must be >= 1");

  KernelFunction kernel{params.kernel,
                        params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(x.cols()),
                        params.coef0, params.degree};

  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(class_count));
  for (std::size_t i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i])].push_back(i);

  std::vector<BinarySvm> machines;
  for (int a = 0; a < class_count; ++a) {
    for (int b = a + 1; b < class_count; ++b) {
      const auto& ia = members[static_cast<std::size_t>(a)];
      const auto& ib = members[static_cast<std::size_t>(b)];
      if (ia.empty() || ib.empty()) continue;
      std::vector<std::size_t> rows(ia);
      rows.insert(rows.end(), ib.begin(), ib.end());
      std::vector<int> ypm(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) ypm[r] = r < ia.size() ? 1 : -1;

      const std::size_t n = rows.size();
      Matrix gram(n, n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r; c < n; ++c) {
          const double v = kernel(x.row(rows[r]), x.row(rows[c]));
          gram(r, c) = v;
          gram(c, r) = v;
        }
      }
      const auto pair_seed = derive_seed(params.seed, static_cast<std::uint64_t>(a * class_count + b));
      auto sol = smo_solve(gram, ypm, params.C, params.tol, params.max_passes, pair_seed, observer);
      if (!sol.diagnostics.converged) {
        throw ConvergenceError(fmt::format(
            "svm: pair ({}, {}) did not converge after {} passes; max KKT violation {:.3g} "
            "(tol {}), {} updates",
            a, b, sol.diagnostics.passes, sol.diagnostics.max_kkt_violation, params.tol,
            sol.diagnostics.updates));
      }

      BinarySvm m;
      m.positive = a;
      m.negative = b;
      m.bias = sol.bias;
      m.diagnostics = sol.diagnostics;
      std::vector<std::size_t> sv_rows;
      for (std::size_t r = 0; r < n; ++r) {
        if (sol.alpha[r] > 0.0) {
          sv_rows.push_back(rows[r]);
          m.coef.push_back(sol.alpha[r] * ypm[r]);
        }
      }
      m.support = x.select_rows(sv_rows);
      machines.push_back(std::move(m));
    }
  }
  return std::make_shared<SvmModel>(std::move(machines), kernel, class_count, params.C);
}

}  // namespace acbench::learn
