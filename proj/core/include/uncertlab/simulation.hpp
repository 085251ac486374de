#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <tuple>
#include <vector>

#include "uncertlab/distributions.hpp"
#include "uncertlab/families.hpp"

namespace uncertlab::simulation {

// Inner protocol contract: ((S,X),(T,Y)) -> bit.
using InnerProtocol =
    std::function<int(const SubsetFamily& s, const BitBlockString& x,
                      const SubsetFamily& t, const BitBlockString& y)>;

// The simulation step: shared uniform Z; Alice's X an eps-noisy copy of Z
// conditioned blockwise on parities U; Bob's Y likewise with V; Alice's S a
// q-noisy copy of T_hat; the inner protocol then runs on ((S,X),(T_hat,Y)).
// T_hat must be typical. With the exact composed-function evaluator as the
// inner protocol the output equals hd_threshold(k, U, V) on every input.
int simulation_protocol(const BitVector& u, const BitVector& v,
                        const SubsetFamily& t_hat, double eps, double q,
                        const InnerProtocol& inner, Rng& rng);

// The exact evaluator of the composed target on simulated inputs: the value
// is the Hamming-threshold of the blockwise parities under Bob's family.
InnerProtocol exact_composed_evaluator();

// Finite distribution keyed by packed atoms.
using DiscreteDistribution = std::map<std::uint64_t, double>;

inline constexpr std::uint64_t kDefaultTvBudget = 1ull << 26;

// (1/2) sum |p - q| over the union support.
double tv_distance_exact(const DiscreteDistribution& p,
                         const DiscreteDistribution& q);

// Exact (X,Y) law of a distribution spec, keyed by pack_blocks(x) and
// pack_blocks(y) in the low/high halves.
DiscreteDistribution xy_law(const samplers::DistributionSpec& spec,
                            std::uint64_t budget = kDefaultTvBudget);

// Law of (X,Y) where X and Y are independent eps-noisy copies of a common
// uniform Z; equals the 2eps-2eps^2 pair law.
DiscreteDistribution common_source_law(std::uint32_t k, std::uint32_t n,
                                       double eps,
                                       std::uint64_t budget = kDefaultTvBudget);

// Joint law of (Q, W, B); B ranges over k-bit strings.
struct JointTable {
  std::uint32_t q_size = 0;
  std::uint32_t w_size = 0;
  std::uint32_t k = 0;  // B in {0,1}^k
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, double> probs;

  void check() const;  // nonnegative, sums to 1 within 1e-12
};

void save_joint_table(const JointTable& t, std::ostream& out);
JointTable load_joint_table(std::istream& in);

// Deterministic message function for the tiny-protocol information-cost
// computation: message index from (S, x).
using MessageFn =
    std::function<std::uint32_t(const SubsetFamily& s, const BitBlockString& x)>;

// Exact I((<T^(i), X^(i)>)_i ; M(X,S) | Y, T) in bits, from the fully
// enumerated joint law of (S, X, T, Y, M) under the given distribution.
double intermediate_info_cost(const MessageFn& message,
                              std::uint32_t message_count,
                              const samplers::DistributionSpec& dist,
                              std::uint64_t budget = kDefaultTvBudget);

// Same quantity over an explicitly enumerated joint law, for degenerate
// diagnostic tables (e.g. a fixed family with the message equal to the
// parity tuple itself).
double intermediate_info_cost(const MessageFn& message,
                              std::uint32_t message_count,
                              const std::vector<samplers::SupportAtom>& atoms);

// Deterministic posterior-argmax guesser E(q,w) and its exact success
// probability Pr[E(Q,W) = B]; ties resolved to the smallest B.
struct ArgmaxEstimator {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> guess;
  double success_probability = 0.0;
};

ArgmaxEstimator posterior_argmax_estimator(const JointTable& table);

}  // namespace uncertlab::simulation
