#pragma once

#include <cstdint>

namespace uncertlab::verifiers {

// Monte Carlo estimate of Stab_rho of the +-1-valued majority on k bits,
// E[h(x)h(y)] over rho-correlated inputs. k must be odd so majority is
// tie-free. Deterministic in the seed for any worker count.
double noise_stability_mc(std::uint32_t k, double rho, std::uint64_t trials,
                          std::uint64_t seed, unsigned workers = 1);

}  // namespace uncertlab::verifiers
