#pragma once

#include <array>
#include <cstdint>

namespace uncertlab::verifiers {

// Gaussian-approximation check for the correlated pair-sum construction:
// Z_i uniform +-1, X' = sum of all ell coordinates, Y' = sum of the first
// (1-delta')*ell coordinates (the others contribute 0). Orthant order:
// index = 2*Sign(X') + Sign(Y') with the usual Sign(0)=1 convention.
struct GaussianCheckReport {
  std::uint32_t ell = 0;
  double delta_prime = 0.0;
  std::uint64_t trials = 0;
  std::array<double, 4> empirical{};   // (-,-), (-,+), (+,-), (+,+)
  std::array<double, 4> predicted{};   // Gaussian orthants at corr sqrt(1-d')
  double max_abs_deviation = 0.0;
  double lambda_min = 0.0;             // smallest eigenvalue of the avg cov
  double predicted_error_scale = 0.0;  // 1 / (lambda^(3/2) sqrt(ell))
  bool degenerate = false;             // lambda = 0 reported, not crashed
  // measured average covariance entries: E[X'^2], E[X'Y'], E[Y'^2] per coord
  double cov_xx = 0.0, cov_xy = 0.0, cov_yy = 0.0;
};

GaussianCheckReport berry_esseen_check(double delta_prime, std::uint32_t ell,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned workers = 1);

// Smallest eigenvalue of [[1, 1-d'], [1-d', 1-d']].
double pair_sum_lambda_min(double delta_prime);

}  // namespace uncertlab::verifiers
