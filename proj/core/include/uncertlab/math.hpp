#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "uncertlab/bits.hpp"

namespace uncertlab {

// Sign convention used everywhere: Sign(x) = 1 for x >= 0, else 0.
// This single rule fixes all majority ties.
inline int sign_bit(double x) {
  if (std::isnan(x)) throw std::domain_error("sign_bit of NaN");
  return x >= 0.0 ? 1 : 0;
}

inline int sign_bit(std::int64_t x) { return x >= 0 ? 1 : 0; }

// Iterated logarithm, base 2 throughout (communication is counted in bits):
// log^(1)(n) = log2(n), log^(i)(n) = max(log2(log^(i-1)(n)), 1) for i >= 2.
inline double iterated_log(std::uint32_t t, std::uint64_t n) {
  if (t == 0 || n == 0) throw std::invalid_argument("iterated_log: t,n >= 1");
  double v = std::log2(static_cast<double>(n));
  for (std::uint32_t i = 2; i <= t; ++i) v = std::max(std::log2(v), 1.0);
  return v;
}

inline std::size_t hamming_distance(const BitVector& u, const BitVector& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("hamming_distance: length mismatch");
  std::size_t c = 0;
  auto uw = u.words(), vw = v.words();
  for (std::size_t i = 0; i < uw.size(); ++i)
    c += static_cast<std::size_t>(std::popcount(uw[i] ^ vw[i]));
  return c;
}

// Parity of w restricted to the coordinates of s (inner product over F2).
inline int f2_inner(const IndexSubset& s, const BitVector& w) {
  if (s.universe_size() != w.size())
    throw std::invalid_argument("f2_inner: length mismatch");
  int p = 0;
  for (auto i : s.indices()) p ^= w.get(i - 1);
  return p;
}

inline int f2_inner(const BitVector& s, const BitVector& w) {
  if (s.size() != w.size())
    throw std::invalid_argument("f2_inner: length mismatch");
  std::uint64_t acc = 0;
  auto sw = s.words(), ww = w.words();
  for (std::size_t i = 0; i < sw.size(); ++i)
    acc ^= static_cast<std::uint64_t>(std::popcount(sw[i] & ww[i]));
  return static_cast<int>(acc & 1u);
}

// Sign-disagreement probability of rho-correlated zero-mean Gaussians,
// arccos(rho)/pi. The input is clamped to [-1,1] after rounding error since
// Monte Carlo correlation estimates can exceed 1 by ~1e-16.
inline double sheppard(double rho) {
  if (std::abs(rho) > 1.0 + 1e-9)
    throw std::domain_error("sheppard: |rho| > 1");
  rho = std::min(1.0, std::max(-1.0, rho));
  return std::acos(rho) / M_PI;
}

// Smallest k with 2*exp(-2*accuracy^2*k) <= failure_prob.
inline std::uint64_t hoeffding_trials(double accuracy, double failure_prob) {
  if (!(accuracy > 0.0 && accuracy < 1.0))
    throw std::invalid_argument("hoeffding_trials: accuracy in (0,1)");
  if (!(failure_prob > 0.0 && failure_prob < 1.0))
    throw std::invalid_argument("hoeffding_trials: failure_prob in (0,1)");
  const double raw = std::log(2.0 / failure_prob) / (2.0 * accuracy * accuracy);
  auto k = static_cast<std::uint64_t>(std::ceil(raw - 1e-12));
  if (k == 0) k = 1;
  // settle float edge cases against the defining inequality
  auto ok = [&](std::uint64_t kk) {
    return 2.0 * std::exp(-2.0 * accuracy * accuracy * static_cast<double>(kk)) <=
           failure_prob * (1.0 + 1e-12);
  };
  while (!ok(k)) ++k;
  while (k > 1 && ok(k - 1)) --k;
  return k;
}

// Lower bound 1 - (2/pi)*arccos(rho) on the noise stability of +-1 majority.
inline double majority_stability_bound(double rho) {
  if (std::abs(rho) > 1.0 + 1e-9)
    throw std::domain_error("majority_stability_bound: |rho| > 1");
  rho = std::min(1.0, std::max(-1.0, rho));
  return 1.0 - (2.0 / M_PI) * std::acos(rho);
}

inline double binomial_coeff(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::uint32_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace uncertlab
