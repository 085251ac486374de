#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uncertlab/bits.hpp"
#include "uncertlab/rng.hpp"

namespace uncertlab::samplers {

// Randomness available to a protocol run.
struct RandomnessSource {
  enum class Kind { Deterministic, Private, Public, Isr };
  Kind kind = Kind::Deterministic;
  std::uint64_t seed_a = 0;  // Private: Alice's seed; Public/Isr: shared seed
  std::uint64_t seed_b = 0;  // Private: Bob's seed
  double rho = 1.0;          // Isr only, in [0,1]

  static RandomnessSource deterministic() { return {}; }
  static RandomnessSource priv(std::uint64_t a, std::uint64_t b) {
    return {Kind::Private, a, b, 1.0};
  }
  static RandomnessSource pub(std::uint64_t shared) {
    return {Kind::Public, shared, 0, 1.0};
  }
  static RandomnessSource isr(double rho, std::uint64_t shared) {
    if (rho < 0.0 || rho > 1.0)
      throw std::invalid_argument("ISR requires rho in [0,1]");
    return {Kind::Isr, shared, 0, rho};
  }
};

enum class DistKind {
  UniformPairs,     // (x,y) uniform on {0,1}^n x {0,1}^n
  NoisyPairs,       // x uniform on k blocks of n, y an eta-noisy copy
  SubsetNoise,      // S uniform subsets, T a q-noisy copy, blockwise
  NuEpsilon,        // SubsetNoise(eps) (x) NoisyPairs(2eps-2eps^2)
  KappaEpsilon,     // SubsetNoise(eps) (x) NoisyPairs(eps)
  ConditionedNoisy  // (X,Y) noisy copies of common Z, blockwise parity-tied
};

struct DistributionSpec {
  DistKind kind;
  std::uint32_t k = 1;
  std::uint32_t n = 1;
  double noise = 0.0;   // eta / q / eps depending on kind
  SubsetFamily t_hat;   // ConditionedNoisy only

  static DistributionSpec uniform_pairs(std::uint32_t n) {
    return validated({DistKind::UniformPairs, 1, n, 0.0, {}});
  }
  static DistributionSpec noisy_pairs(std::uint32_t k, std::uint32_t n,
                                      double eta) {
    return validated({DistKind::NoisyPairs, k, n, eta, {}});
  }
  static DistributionSpec subset_noise(std::uint32_t k, std::uint32_t n,
                                       double q) {
    return validated({DistKind::SubsetNoise, k, n, q, {}});
  }
  static DistributionSpec nu_epsilon(std::uint32_t k, std::uint32_t n,
                                     double eps) {
    return validated({DistKind::NuEpsilon, k, n, eps, {}});
  }
  static DistributionSpec kappa_epsilon(std::uint32_t k, std::uint32_t n,
                                        double eps) {
    return validated({DistKind::KappaEpsilon, k, n, eps, {}});
  }
  static DistributionSpec conditioned_noisy(SubsetFamily t_hat, double eps) {
    DistributionSpec s{DistKind::ConditionedNoisy,
                       static_cast<std::uint32_t>(t_hat.block_count()),
                       t_hat.block_size(), eps, std::move(t_hat)};
    return validated(std::move(s));
  }

  // Specs store eps; derived rates such as 2eps-2eps^2 are computed on use.
  double pair_noise_rate() const {
    switch (kind) {
      case DistKind::NoisyPairs: return noise;
      case DistKind::NuEpsilon: return 2.0 * noise - 2.0 * noise * noise;
      case DistKind::KappaEpsilon: return noise;
      default: return 0.0;
    }
  }

  bool has_subsets() const {
    return kind == DistKind::SubsetNoise || kind == DistKind::NuEpsilon ||
           kind == DistKind::KappaEpsilon;
  }
  bool has_strings() const { return kind != DistKind::SubsetNoise; }

 private:
  static DistributionSpec validated(DistributionSpec s) {
    if (s.k == 0 || s.n == 0)
      throw std::invalid_argument("distribution shape must be positive");
    if (s.noise < 0.0 || s.noise > 1.0)
      throw std::invalid_argument("noise parameter outside [0,1]");
    return s;
  }
};

// One draw. Which fields are populated depends on the spec kind.
struct Draw {
  BitBlockString x, y;
  SubsetFamily S, T;
};

Draw sample(const DistributionSpec& spec, Rng& rng);

// Exact conditional sampling for the parity-tied construction: Z uniform,
// X an eps-noisy copy of Z conditioned blockwise on <T_hat^(i), X^(i)> = U_i,
// Y symmetric with V. Per-block rejection keeps the conditional law exact.
struct ConditionedDraw {
  BitBlockString z, x, y;
};
ConditionedDraw sample_conditioned(const SubsetFamily& t_hat, double eps,
                                   const BitVector& u, const BitVector& v,
                                   Rng& rng);

// r uniform; r' obtained by flipping each coordinate of r independently with
// probability (1-rho)/2. Deterministic in the shared seed.
std::pair<BitVector, BitVector> isr_streams(double rho, std::size_t length,
                                            std::uint64_t shared_seed);

// Every block size in [n/3, 2n/3] (inclusive).
bool is_typical(const SubsetFamily& t_hat);

// Samples a uniformly random family and filters by is_typical. The experiments
// default to this when a "fixed typical" family is called for.
SubsetFamily sample_typical_family(std::uint32_t k, std::uint32_t n, Rng& rng);

struct SupportAtom {
  Draw draw;
  double probability;
};

inline constexpr std::uint64_t kDefaultSupportBudget = 1ull << 26;

using SupportVisitor = std::function<void(const Draw&, double)>;

// Streams the complete support with exact probabilities (sum to 1 within
// 1e-12). Throws std::length_error when the support exceeds the budget.
void for_each_support_atom(const DistributionSpec& spec, std::uint64_t budget,
                           const SupportVisitor& visit);

// Materialized variant for small supports.
std::vector<SupportAtom> enumerate_support(
    const DistributionSpec& spec,
    std::uint64_t budget = kDefaultSupportBudget);

// Support size without materializing it (~0ull when too large to count).
std::uint64_t support_size(const DistributionSpec& spec);

// Little-endian integer packing of draws; bit j of block i is bit i*n+j.
// used to key exact laws by atom.
BitBlockString unpack_blocks(std::uint64_t bits, std::uint32_t k,
                             std::uint32_t n);
std::uint64_t pack_blocks(const BitBlockString& s);
SubsetFamily unpack_family(std::uint64_t bits, std::uint32_t k,
                           std::uint32_t n);
std::uint64_t pack_family(const SubsetFamily& f);

}  // namespace uncertlab::samplers
