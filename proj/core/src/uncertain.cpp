#include "uncertlab/uncertain.hpp"

#include "uncertlab/families.hpp"

namespace uncertlab::protocols {

UncertainRun isr_uncertain_protocol(const BitVector& fx_values,
                                    const OneWayCertainTable& g_table,
                                    std::uint64_t y_atom,
                                    const std::vector<std::uint32_t>& mu_y_weights,
                                    double theta,
                                    const samplers::RandomnessSource& source,
                                    std::uint32_t max_table_bits,
                                    unsigned workers) {
  const std::uint32_t L = g_table.message_count;
  if (L == 0 || g_table.bob_tables.size() != L)
    throw std::invalid_argument("isr_uncertain_protocol: bad table");
  if (max_table_bits < 64 && L > (1ull << max_table_bits))
    throw std::invalid_argument("isr_uncertain_protocol: table budget exceeded");
  const std::size_t domain = fx_values.size();
  for (const auto& t : g_table.bob_tables)
    if (t.size() != domain)
      throw std::invalid_argument("isr_uncertain_protocol: domain mismatch");
  if (y_atom >= domain)
    throw std::invalid_argument("isr_uncertain_protocol: y outside domain");

  // u = (-1)^f_x, v_j = (-1)^B_j, estimated at accuracy theta/3
  const SignVector u = SignVector::from_bits(fx_values);
  std::vector<SignVector> targets;
  targets.reserve(L);
  for (const auto& t : g_table.bob_tables)
    targets.push_back(SignVector::from_bits(t));

  UncertainRun out;
  out.agreements =
      gip_estimate(u, targets, mu_y_weights, theta / 3.0, source, workers);

  std::uint32_t jmax = 0;
  for (std::uint32_t j = 1; j < L; ++j)
    if (out.agreements.estimates[j] > out.agreements.estimates[jmax]) jmax = j;
  out.chosen_message = jmax;
  out.run.message = out.agreements.alice_message;
  out.run.bits_communicated = out.agreements.repetitions;
  out.run.output = g_table.bob_tables[jmax].get(y_atom);
  out.run.randomness = source;
  return out;
}

OneWayCertainTable build_parity_table(const SubsetFamily& s) {
  const auto k = static_cast<std::uint32_t>(s.block_count());
  const std::uint32_t n = s.block_size();
  const std::uint64_t kn = static_cast<std::uint64_t>(k) * n;
  if (kn > 24) throw std::invalid_argument("build_parity_table: domain too big");
  const std::uint64_t domain = 1ull << kn;

  OneWayCertainTable table;
  table.message_count = 1u << k;
  table.bob_tables.assign(table.message_count, BitVector(domain));
  for (std::uint64_t y = 0; y < domain; ++y) {
    const BitBlockString yb = samplers::unpack_blocks(y, k, n);
    const BitVector py = functions::block_parities(s, yb);
    for (std::uint32_t msg = 0; msg < table.message_count; ++msg) {
      std::int64_t sum = 0;
      for (std::uint32_t i = 0; i < k; ++i) {
        const int parity = static_cast<int>((msg >> i) & 1u) ^ py.get(i);
        sum += parity ? -1 : +1;
      }
      table.bob_tables[msg].set(y, sign_bit(sum));
    }
  }
  table.alice_message = [s](std::uint64_t x_atom) {
    const auto kk = static_cast<std::uint32_t>(s.block_count());
    const BitBlockString xb = samplers::unpack_blocks(x_atom, kk, s.block_size());
    const BitVector px = functions::block_parities(s, xb);
    std::uint32_t msg = 0;
    for (std::uint32_t i = 0; i < kk; ++i)
      if (px.get(i)) msg |= 1u << i;
    return msg;
  };
  return table;
}

BitVector parity_family_row(const SubsetFamily& s, const BitBlockString& x) {
  const auto k = static_cast<std::uint32_t>(s.block_count());
  const std::uint32_t n = s.block_size();
  const std::uint64_t kn = static_cast<std::uint64_t>(k) * n;
  if (kn > 24) throw std::invalid_argument("parity_family_row: domain too big");
  const std::uint64_t domain = 1ull << kn;
  const BitVector px = functions::block_parities(s, x);
  BitVector row(domain);
  for (std::uint64_t y = 0; y < domain; ++y) {
    const BitBlockString yb = samplers::unpack_blocks(y, k, n);
    const BitVector py = functions::block_parities(s, yb);
    std::int64_t sum = 0;
    for (std::uint32_t i = 0; i < k; ++i)
      sum += (px.get(i) ^ py.get(i)) ? -1 : +1;
    row.set(y, sign_bit(sum));
  }
  return row;
}

}  // namespace uncertlab::protocols
