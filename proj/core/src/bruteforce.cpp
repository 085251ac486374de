#include "uncertlab/bruteforce.hpp"

#include <stdexcept>

namespace uncertlab::protocols {

BruteForceResult brute_force_best_protocol(
    const std::vector<std::vector<int>>& f,
    const std::vector<std::vector<double>>& mu, std::uint32_t budget_bits) {
  const std::size_t nx = f.size();
  if (nx == 0 || nx > 8)
    throw std::invalid_argument("brute force: |X| in [1,8]");
  if (budget_bits > 2) throw std::invalid_argument("brute force: c <= 2");
  const std::size_t ny = f[0].size();
  if (mu.size() != nx)
    throw std::invalid_argument("brute force: weight shape mismatch");
  for (std::size_t x = 0; x < nx; ++x)
    if (f[x].size() != ny || mu[x].size() != ny)
      throw std::invalid_argument("brute force: ragged tables");

  const std::uint32_t messages = 1u << budget_bits;
  std::uint64_t assignments = 1;
  for (std::size_t i = 0; i < nx; ++i) assignments *= messages;

  BruteForceResult best;
  best.min_error = 2.0;
  std::vector<std::uint8_t> assign(nx, 0);
  for (std::uint64_t code = 0; code < assignments; ++code) {
    std::uint64_t c = code;
    for (std::size_t x = 0; x < nx; ++x) {
      assign[x] = static_cast<std::uint8_t>(c % messages);
      c /= messages;
    }
    // Bob plays the lighter side of the posterior per (message, y).
    double err = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::uint32_t msg = 0; msg < messages; ++msg) {
        double w0 = 0.0, w1 = 0.0;  // mass of f=0 / f=1 senders
        for (std::size_t x = 0; x < nx; ++x) {
          if (assign[x] != msg) continue;
          (f[x][y] ? w1 : w0) += mu[x][y];
        }
        err += std::min(w0, w1);
      }
    }
    if (err < best.min_error) {
      best.min_error = err;
      best.message_of_x = assign;
    }
  }
  return best;
}

}  // namespace uncertlab::protocols
