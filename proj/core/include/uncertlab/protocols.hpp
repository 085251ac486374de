#pragma once

#include <cstdint>
#include <string>

#include "uncertlab/bits.hpp"
#include "uncertlab/distributions.hpp"
#include "uncertlab/families.hpp"

namespace uncertlab::protocols {

// One-way transcript: a single Alice-to-Bob payload, then Bob's output.
struct ProtocolRun {
  BitVector message;
  int output = 0;
  std::uint64_t bits_communicated = 0;
  samplers::RandomnessSource randomness;
};

// Shared-subset baseline: Alice sends (X_j : j in T), Bob evaluates the
// subset majority directly. Costs |T| bits.
ProtocolRun certain_subset_protocol(const IndexSubset& t, const SignVector& x,
                                    const SignVector& y);

// Shared-family baseline: Alice sends the k block parities <S^(i), x^(i)>,
// Bob folds in his own parities. Costs k bits.
ProtocolRun certain_parity_protocol(const SubsetFamily& s,
                                    const BitBlockString& x,
                                    const BitBlockString& y);

// Public-coin hashing set recovery. Alice sends one b-bit tag per element of
// S with b = ceil(log2(l^2 / failure_prob)); Bob matches tags against his T.
// The failure event is a hash collision inside T, which is reported rather
// than silently mis-recovered.
struct SetRecoveryResult {
  IndexSubset recovered;
  bool ambiguous = false;    // two elements of T collided under the hash
  std::uint32_t tag_bits = 0;
  std::uint64_t bits_communicated = 0;
};

SetRecoveryResult hash_set_recovery(const IndexSubset& s, const IndexSubset& t,
                                    double failure_prob,
                                    const samplers::RandomnessSource& source);

}  // namespace uncertlab::protocols
