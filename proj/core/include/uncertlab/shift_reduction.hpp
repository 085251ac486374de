#pragma once

#include <cstdint>
#include <functional>

#include "uncertlab/bits.hpp"
#include "uncertlab/rng.hpp"
#include "uncertlab/stretch.hpp"

namespace uncertlab::reductions {

// Parameter block of the reduction from the shift game to the uncertain
// subset-majority problem. delta' is an exact rational and ell must make
// r = delta'*ell integral; no silent rounding.
struct ShiftReductionParams {
  double epsilon = 0.0;     // separation target in (0, 0.5]
  double eta = 0.0;         // empirical-error margin
  double eps_prime = 0.0;   // 1 - cos(epsilon * pi)
  std::uint64_t t = 0;      // ceil(eps_prime / delta')
  std::uint64_t r = 0;      // delta' * ell
  std::uint64_t a = 0;      // ell * (1 - t * delta')
  std::uint64_t s = 0;      // ell * (1 - delta') = (t-1)*r + a
  std::uint64_t ell = 0;
  std::uint64_t k = 0;      // inner trial count, ceil(4 / eta^2)

  static ShiftReductionParams from_protocol(double epsilon,
                                            std::uint64_t delta_num,
                                            std::uint64_t delta_den,
                                            std::uint64_t ell, double eta);

  // Structural instance (t, r, a) for the exact coordinate-law checks; no
  // epsilon/eta attached.
  static ShiftReductionParams from_raw(std::uint64_t t, std::uint64_t r,
                                       std::uint64_t a);

  StretchParams stretch_params() const {
    return {static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(a)};
  }
};

struct ShiftGameInstance {
  enum class Side { Prefix, Suffix };
  SortedTuple sigma;  // Bob's sorted t-tuple over [d]
  Side alice_side = Side::Prefix;
};

// g and h of the reduction: Bob scores the received coordinate sequence
// (X over Lambda) against his prefix and suffix index tuples.
std::pair<int, int> prefix_suffix_scores(const SortedTuple& lambda,
                                         const SortedTuple& phi,
                                         const SortedTuple& psi,
                                         const SignVector& x,
                                         const SignVector& y);

// Pluggable inner protocol; any stochastic protocol is a fresh draw per call.
struct BlackBoxProtocol {
  std::function<int(const IndexSubset& s, const SignVector& x,
                    const IndexSubset& t, const SignVector& y, Rng& rng)>
      evaluate;
  std::uint64_t cost_bits = 0;
};

struct ShiftGameOutcome {
  bool yes = false;  // "Alice holds the prefix"
  std::uint64_t err_prefix = 0;
  std::uint64_t err_suffix = 0;
  std::uint64_t bits_consumed = 0;  // k * (|Pi| + s)
};

// Runs the full reduction: stretch both sides, draw k private input pairs,
// run the black box per pair, transmit Alice's s influential bits, compare
// empirical prefix/suffix errors (ties decide YES).
ShiftGameOutcome shift_game_reduction(const ShiftGameInstance& instance,
                                      const ShiftReductionParams& params,
                                      const BlackBoxProtocol& black_box,
                                      Rng& rng);

// Exact verification that the coordinate pairs
// (X_{Lambda_j} Y_{Phi_j}, X_{Lambda_j} Y_{Psi_j})_{j in [s]} are independent
// with uniform marginals on {+-1}^2 for j <= s-a and uniform on the diagonal
// for j > s-a. Enumerates the joint law over the relevant coordinates; the
// instance is enumerable when s <= 12 and 2s + r is within the bit budget.
bool verify_indep_coord(const ShiftGameInstance& instance,
                        const ShiftReductionParams& params,
                        std::uint32_t enumeration_bit_budget = 26);

}  // namespace uncertlab::reductions
