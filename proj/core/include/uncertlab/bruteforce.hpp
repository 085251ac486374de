#pragma once

#include <cstdint>
#include <vector>

namespace uncertlab::protocols {

// Exhaustive search over one-way deterministic protocols with 2^c messages,
// Bob playing posterior-optimal responses. Realizes the distributional
// complexity definition directly at micro scale: |X| <= 8 and c <= 2.
struct BruteForceResult {
  double min_error = 0.0;
  std::vector<std::uint8_t> message_of_x;  // witness message function
};

BruteForceResult brute_force_best_protocol(
    const std::vector<std::vector<int>>& f,       // f[x][y] in {0,1}
    const std::vector<std::vector<double>>& mu,   // weights, sum to 1
    std::uint32_t budget_bits);

}  // namespace uncertlab::protocols
