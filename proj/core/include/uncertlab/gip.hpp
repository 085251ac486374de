#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uncertlab/bits.hpp"
#include "uncertlab/distributions.hpp"
#include "uncertlab/protocols.hpp"

namespace uncertlab::protocols {

// Correlated-agreement estimates of weighted inner products E_{i~P}[u_i v_i],
// one entry per target. Values are clamped to [-1-theta, 1+theta].
struct GipEstimate {
  std::vector<double> estimates;
  std::uint64_t repetitions = 0;
  double theta = 0.0;
  double rho = 0.0;
  BitVector alice_message;  // one sign bit per repetition
};

// Repetition count: ceil(C * theta^-2 * rho^-2 * ln(3t/theta)).
std::uint64_t gip_repetitions(double theta, double rho, std::size_t targets,
                              double constant = 8.0);

inline constexpr std::uint64_t kGipReplicationCap = 1ull << 20;

// Per-repetition ISR expansion: each (replicated) coordinate consumes one
// 64-bit block of Alice's stream r and of Bob's flipped stream r'. The block
// sums behave like rho-correlated Gaussians, so the sign-agreement rate of
// the weighted dot products follows the arccos law and is inverted through a
// calibrated effective correlation.
//
// Alice's words are always drawn before the flip words, in a fixed order that
// does not depend on the targets; her message is a pure function of
// (u, stream, parameters).
class IsrBlockKernel {
 public:
  IsrBlockKernel(double rho, std::uint64_t shared_seed, std::size_t width);

  std::size_t width() const { return width_; }
  double rho() const { return rho_; }

  // One repetition: returns Alice's sign bit for `alice_mask` and fills
  // `target_sign_bits` (one per target mask). A mask word is ~0 for a -1
  // coordinate and 0 for +1.
  int run_rep(std::uint64_t rep,
              std::span<const std::uint64_t> alice_mask,
              std::span<const std::vector<std::uint64_t>> target_masks,
              int* target_sign_bits);

 private:
  double rho_;
  std::uint64_t seed_;
  std::size_t width_;
  BiasedBits flips_;  // flip probability (1-rho)/2
  std::vector<std::uint64_t> r_, rp_;
};

// One-way estimation of E_{i~P}[u_i v^(j)_i] for every target j, within
// theta with probability >= 1-theta. P is given as nonnegative integer
// replication counts (exact rational weights); empty means uniform.
GipEstimate gip_estimate(const SignVector& u,
                         const std::vector<SignVector>& targets,
                         const std::vector<std::uint32_t>& weight_counts,
                         double theta,
                         const samplers::RandomnessSource& source,
                         unsigned workers = 1,
                         double rep_constant = 8.0);

}  // namespace uncertlab::protocols
