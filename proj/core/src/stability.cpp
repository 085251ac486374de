#include "uncertlab/stability.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

#include "uncertlab/parallel.hpp"

namespace uncertlab::verifiers {

double noise_stability_mc(std::uint32_t k, double rho, std::uint64_t trials,
                          std::uint64_t seed, unsigned workers) {
  if (k % 2 == 0)
    throw std::invalid_argument("noise_stability_mc: k must be odd");
  if (rho < -1.0 || rho > 1.0)
    throw std::invalid_argument("noise_stability_mc: rho in [-1,1]");
  if (trials == 0) throw std::invalid_argument("noise_stability_mc: trials");

  // rho-correlated +-1 pair: flip each coordinate with probability (1-rho)/2.
  // For negative rho, flip with (1+rho)/2 and negate one side.
  const bool negate = rho < 0.0;
  const BiasedBits flips((1.0 - std::abs(rho)) / 2.0);
  const std::uint32_t words = (k + 63) / 64;
  const std::uint64_t tail_mask =
      (k % 64) ? ((~0ull) >> (64 - (k % 64))) : ~0ull;

  const std::uint64_t agreements = mc_count(
      trials, workers, seed, tag_hash("noise-stability"),
      [&](std::uint64_t, Rng& rng) {
        std::int64_t xsum = 0, ysum = 0;
        for (std::uint32_t w = 0; w < words; ++w) {
          const std::uint64_t mask = (w + 1 == words) ? tail_mask : ~0ull;
          const std::uint64_t x = rng.next_u64() & mask;
          const std::uint64_t y = (x ^ flips.draw(rng)) & mask;
          const auto bits =
              static_cast<std::int64_t>(std::popcount(mask));
          xsum += bits - 2 * static_cast<std::int64_t>(std::popcount(x));
          ysum += bits - 2 * static_cast<std::int64_t>(std::popcount(y));
        }
        if (negate) ysum = -ysum;
        return (xsum > 0) == (ysum > 0);  // k odd, no ties
      });
  return 2.0 * static_cast<double>(agreements) / static_cast<double>(trials) -
         1.0;
}

}  // namespace uncertlab::verifiers
