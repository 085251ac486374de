#pragma once

#include "uncertlab/families.hpp"
#include "uncertlab/report.hpp"

namespace uncertlab::functions {

// Exact Pr_{(x,y) ~ dist}[f != g] by enumerating the distribution's support.
// Exceeded budgets are an error, never silent sampling.
double distance_exact(const FunctionSpec& f, const FunctionSpec& g,
                      const samplers::DistributionSpec& dist,
                      std::uint64_t budget = samplers::kDefaultSupportBudget);

// Unbiased Monte Carlo estimate of the weighted distance, deterministic in
// the master seed for any worker count.
ExperimentReport distance_monte_carlo(const FunctionSpec& f,
                                      const FunctionSpec& g,
                                      const samplers::DistributionSpec& dist,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned workers = 1);

}  // namespace uncertlab::functions
