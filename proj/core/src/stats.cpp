#include "acbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "acbench/error.hpp"

namespace acbench::eval {

namespace {

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw InvalidArgument("regularized_gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw InvalidArgument("chi_square_sf: dof must be >= 1");
  if (std::isnan(x)) throw InvalidArgument("chi_square_sf: x is NaN");
  if (x <= 0.0) return 1.0;
  return std::clamp(regularized_gamma_q(0.5 * dof, 0.5 * x), 0.0, 1.0);
}

McNemarResult mcnemar_counts(long b, long c) {
  if (b < 0 || c < 0) throw InvalidArgument("mcnemar: negative counts");
  McNemarResult r;
  r.b = b;
  r.c = c;
  if (b + c == 0) {
    r.degenerate = true;
    return r;
  }
  const double d = std::abs(static_cast<double>(b - c)) - 1.0;
  r.chi2 = d * d / static_cast<double>(b + c);
  r.p = chi_square_sf(r.chi2, 1);
  return r;
}

McNemarResult mcnemar(std::span<const std::uint8_t> correct1, std::span<const std::uint8_t> correct2) {
  if (correct1.size() != correct2.size()) throw InvalidArgument("mcnemar: sample sets differ in size");
  long b = 0;
  long c = 0;
  for (std::size_t i = 0; i < correct1.size(); ++i) {
    if (correct1[i] != 0 && correct2[i] == 0) ++b;
    if (correct1[i] == 0 && correct2[i] != 0) ++c;
  }
  return mcnemar_counts(b, c);
}

Matrix rank_rows(const Matrix& perf) {
  Matrix ranks(perf.rows(), perf.cols());
  std::vector<std::size_t> order(perf.cols());
  for (std::size_t r = 0; r < perf.rows(); ++r) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return perf(r, a) > perf(r, b); });
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && perf(r, order[j]) == perf(r, order[i])) ++j;
      // Positions i..j-1 share ranks i+1..j.
      const double avg = 0.5 * static_cast<double>(i + 1 + j);
      for (std::size_t t = i; t < j; ++t) ranks(r, order[t]) = avg;
      i = j;
    }
  }
  return ranks;
}

FriedmanResult friedman(const Matrix& perf) {
  if (perf.rows() < 2 || perf.cols() < 2) throw InvalidArgument("friedman: need N >= 2 rows and k >= 2 columns");
  for (double v : perf.data()) {
    if (!std::isfinite(v)) throw InvalidArgument("friedman: non-finite score");
  }
  FriedmanResult out;
  out.n = perf.rows();
  out.k = perf.cols();
  const Matrix ranks = rank_rows(perf);
  out.avg_ranks.assign(out.k, 0.0);
  for (std::size_t r = 0; r < out.n; ++r) {
    for (std::size_t j = 0; j < out.k; ++j) out.avg_ranks[j] += ranks(r, j);
  }
  double sum_sq = 0.0;
  for (double& rj : out.avg_ranks) {
    rj /= static_cast<double>(out.n);
    sum_sq += rj * rj;
  }
  const auto n = static_cast<double>(out.n);
  const auto k = static_cast<double>(out.k);
  out.chi2 = 12.0 * n / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
  // All-tied rows can leave a rounding residue of either sign.
  if (std::abs(out.chi2) < 1e-12) out.chi2 = 0.0;
  out.p = chi_square_sf(std::max(out.chi2, 0.0), static_cast<int>(out.k) - 1);
  return out;
}

double nemenyi_cd(double q_alpha, std::size_t k, std::size_t n) {
  if (k < 2 || n < 1) throw InvalidArgument("nemenyi_cd: need k >= 2 and N >= 1");
  const auto kk = static_cast<double>(k);
  return q_alpha * std::sqrt(kk * (kk + 1.0) / (6.0 * static_cast<double>(n)));
}

}  // namespace acbench::eval
