#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uncertlab/gip.hpp"

namespace uncertlab::protocols {

// A one-way certain protocol over an explicitly enumerated receiver domain:
// Alice's message function and Bob's per-message output tables.
struct OneWayCertainTable {
  std::uint32_t message_count = 0;                        // L
  std::vector<BitVector> bob_tables;                      // L tables over Y
  std::function<std::uint32_t(std::uint64_t)> alice_message;  // x atom -> [L]
};

struct UncertainRun {
  ProtocolRun run;
  std::uint32_t chosen_message = 0;
  GipEstimate agreements;
};

// One-way uncertain protocol over imperfectly shared randomness. Alice holds
// f restricted to her input (its value on every y atom); Bob holds his
// certain protocol's tables and his input. Bob estimates the agreement of
// Alice's row with each table column at accuracy theta/3 and outputs the
// argmax column at his own y (ties to the lowest index).
//
// mu_y_weights are exact rational weights over the y domain (empty =
// uniform); only product input distributions reach this point.
UncertainRun isr_uncertain_protocol(const BitVector& fx_values,
                                    const OneWayCertainTable& g_table,
                                    std::uint64_t y_atom,
                                    const std::vector<std::uint32_t>& mu_y_weights,
                                    double theta,
                                    const samplers::RandomnessSource& source,
                                    std::uint32_t max_table_bits = 20,
                                    unsigned workers = 1);

// Certain one-way table for the block-parity family: message = the k block
// parities of x, Bob's table evaluates the real-valued majority of
// (-1)^(message_i XOR <S^(i), y^(i)>).
OneWayCertainTable build_parity_table(const SubsetFamily& s);

// f(x, .) over all y atoms for the same family.
BitVector parity_family_row(const SubsetFamily& s, const BitBlockString& x);

}  // namespace uncertlab::protocols
