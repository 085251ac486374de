#include "uncertlab/protocols.hpp"

#include <cmath>
#include <unordered_map>

namespace uncertlab::protocols {

ProtocolRun certain_subset_protocol(const IndexSubset& t, const SignVector& x,
                                    const SignVector& y) {
  if (t.universe_size() != x.size() || x.size() != y.size())
    throw std::invalid_argument("certain_subset_protocol: length mismatch");
  ProtocolRun run;
  run.message = BitVector(t.size());
  std::size_t pos = 0;
  for (auto i : t.indices()) run.message.set(pos++, x[i - 1] == -1);
  run.bits_communicated = run.message.size();
  // Bob's view: reconstruct the selected coordinates from the message.
  std::int64_t sum = 0;
  pos = 0;
  for (auto i : t.indices()) {
    const int xi = run.message.get(pos++) ? -1 : +1;
    sum += xi * y[i - 1];
  }
  run.output = sign_bit(sum);
  run.randomness = samplers::RandomnessSource::deterministic();
  return run;
}

ProtocolRun certain_parity_protocol(const SubsetFamily& s,
                                    const BitBlockString& x,
                                    const BitBlockString& y) {
  if (s.block_count() != x.block_count() || s.block_size() != x.block_size() ||
      x.block_count() != y.block_count() || x.block_size() != y.block_size())
    throw std::invalid_argument("certain_parity_protocol: shape mismatch");
  ProtocolRun run;
  const auto k = s.block_count();
  run.message = functions::block_parities(s, x);
  run.bits_communicated = k;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const int parity = run.message.get(i) ^ f2_inner(s.block(i), y.block(i));
    sum += parity ? -1 : +1;
  }
  run.output = sign_bit(sum);
  run.randomness = samplers::RandomnessSource::deterministic();
  return run;
}

SetRecoveryResult hash_set_recovery(const IndexSubset& s, const IndexSubset& t,
                                    double failure_prob,
                                    const samplers::RandomnessSource& source) {
  if (source.kind != samplers::RandomnessSource::Kind::Public)
    throw std::invalid_argument("hash_set_recovery needs public coins");
  if (!(failure_prob > 0.0 && failure_prob < 1.0))
    throw std::invalid_argument("hash_set_recovery: failure_prob in (0,1)");
  for (auto i : s.indices())
    if (!t.contains(i))
      throw std::invalid_argument("hash_set_recovery: S must be inside T");

  const auto ell = static_cast<double>(t.size());
  SetRecoveryResult res;
  res.tag_bits =
      t.size() == 0
          ? 1
          : static_cast<std::uint32_t>(
                std::ceil(std::log2(std::max(1.0, ell * ell / failure_prob))));
  if (res.tag_bits > 63) res.tag_bits = 63;
  const std::uint64_t tag_mask = (1ull << res.tag_bits) - 1;
  const std::uint64_t hkey = Rng::derive_key(
      source.seed_a, {tag_hash("set-recovery-hash")});
  auto hash_of = [&](std::uint32_t element) {
    return splitmix64(hkey ^ splitmix64(element)) & tag_mask;
  };

  res.bits_communicated = s.size() * res.tag_bits;

  // Bob's side: bucket T by tag, then resolve Alice's tags.
  std::unordered_map<std::uint64_t, std::uint32_t> owner;  // tag -> element
  owner.reserve(t.size() * 2);
  for (auto e : t.indices()) {
    auto [it, fresh] = owner.emplace(hash_of(e), e);
    if (!fresh) res.ambiguous = true;
  }
  std::vector<std::uint32_t> rec;
  rec.reserve(s.size());
  for (auto e : s.indices()) {
    auto it = owner.find(hash_of(e));
    if (it != owner.end()) rec.push_back(it->second);
  }
  std::sort(rec.begin(), rec.end());
  rec.erase(std::unique(rec.begin(), rec.end()), rec.end());
  res.recovered = IndexSubset(std::move(rec), t.universe_size());
  return res;
}

}  // namespace uncertlab::protocols
