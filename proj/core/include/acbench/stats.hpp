#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acbench/matrix.hpp"

namespace acbench::eval {

/// Regularized upper incomplete gamma Q(a, x): series below a + 1,
/// continued fraction above.
double regularized_gamma_q(double a, double x);

/// Upper tail P(X >= x) of a chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double x, int dof);

struct McNemarResult {
  /// b: first correct, second wrong. c: the reverse.
  long b = 0;
  long c = 0;
  double chi2 = 0.0;
  double p = 1.0;
  /// b + c = 0; chi2 is 0 and p is 1.
  bool degenerate = false;
};

/// Continuity-corrected statistic (|b - c| - 1)^2 / (b + c) with 1 dof.
McNemarResult mcnemar(std::span<const std::uint8_t> correct1, std::span<const std::uint8_t> correct2);
McNemarResult mcnemar_counts(long b, long c);

struct FriedmanResult {
  double chi2 = 0.0;
  double p = 1.0;
  /// Average rank per algorithm; 1 is best.
  std::vector<double> avg_ranks;
  std::size_t n = 0;
  std::size_t k = 0;
};

/// Ranks each row (higher score = rank 1, ties share the average rank).
Matrix rank_rows(const Matrix& performance);

/// Rows are datasets (or blocks), columns algorithms.
/// chi2 = 12N / (k(k+1)) * (sum R_j^2 - k(k+1)^2 / 4), p with k - 1 dof.
FriedmanResult friedman(const Matrix& performance);

/// Nemenyi critical difference q_alpha * sqrt(k(k+1) / (6N)).
double nemenyi_cd(double q_alpha, std::size_t k, std::size_t n);

}  // namespace acbench::eval
