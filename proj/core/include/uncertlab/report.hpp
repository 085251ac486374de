#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace uncertlab {

struct Estimate {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
};

inline Estimate bernoulli_estimate(const std::string& name,
                                   std::uint64_t successes,
                                   std::uint64_t trials) {
  Estimate e;
  e.name = name;
  const double n = static_cast<double>(trials);
  e.value = static_cast<double>(successes) / n;
  e.stderr_ = std::sqrt(e.value * (1.0 - e.value) / n);
  e.ci95_lo = e.value - 1.96 * e.stderr_;
  e.ci95_hi = e.value + 1.96 * e.stderr_;
  return e;
}

inline Estimate mean_estimate(const std::string& name, double sum,
                              double sum_sq, std::uint64_t trials) {
  Estimate e;
  e.name = name;
  const double n = static_cast<double>(trials);
  e.value = sum / n;
  const double var = std::max(0.0, sum_sq / n - e.value * e.value);
  e.stderr_ = trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  e.ci95_lo = e.value - 1.96 * e.stderr_;
  e.ci95_hi = e.value + 1.96 * e.stderr_;
  return e;
}

struct ExperimentReport {
  std::string experiment_id;
  std::vector<std::pair<std::string, std::string>> params;  // ordered echo
  std::uint64_t trials = 0;
  std::vector<Estimate> estimates;
  std::uint64_t master_seed = 0;
  double wall_ms = 0.0;

  void param(const std::string& k, const std::string& v) {
    params.emplace_back(k, v);
  }
  const Estimate& primary() const { return estimates.front(); }
};

}  // namespace uncertlab
