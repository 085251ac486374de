#include "uncertlab/gip.hpp"

#include <cmath>

#include "uncertlab/calibration.hpp"
#include "uncertlab/parallel.hpp"

namespace uncertlab::protocols {

std::uint64_t gip_repetitions(double theta, double rho, std::size_t targets,
                              double constant) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("gip: theta in (0,1)");
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("gip: rho = 0 carries no signal");
  const double t = static_cast<double>(std::max<std::size_t>(1, targets));
  return static_cast<std::uint64_t>(
      std::ceil(constant / (theta * theta * rho * rho) *
                std::log(3.0 * t / theta)));
}

IsrBlockKernel::IsrBlockKernel(double rho, std::uint64_t shared_seed,
                               std::size_t width)
    : rho_(rho),
      seed_(shared_seed),
      width_(width),
      flips_((1.0 - rho) / 2.0),
      r_(width),
      rp_(width) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("gip: rho in (0,1]");
}

int IsrBlockKernel::run_rep(std::uint64_t rep,
                            std::span<const std::uint64_t> alice_mask,
                            std::span<const std::vector<std::uint64_t>> target_masks,
                            int* target_sign_bits) {
  Rng rng = Rng::substream(seed_, {tag_hash("gip-rep"), rep});
  const std::size_t w = width_;

  // Alice's stream first, in full, so her message never depends on targets.
  std::uint64_t apop = 0;
  for (std::size_t i = 0; i < w; ++i) {
    const std::uint64_t word = rng.next_u64();
    r_[i] = word;
    apop += static_cast<std::uint64_t>(std::popcount(word ^ alice_mask[i]));
  }
  // dot = 64*w - 2*apop; Sign >= 0 iff apop <= 32*w
  const int alice_bit = apop <= 32 * w ? 1 : 0;

  if (flips_.trivial_zero()) {
    for (std::size_t i = 0; i < w; ++i) rp_[i] = r_[i];
  } else {
    for (std::size_t i = 0; i < w; ++i) rp_[i] = r_[i] ^ flips_.draw(rng);
  }

  for (std::size_t j = 0; j < target_masks.size(); ++j) {
    const auto& tm = target_masks[j];
    std::uint64_t bpop = 0;
    for (std::size_t i = 0; i < w; ++i)
      bpop += static_cast<std::uint64_t>(std::popcount(rp_[i] ^ tm[i]));
    target_sign_bits[j] = bpop <= 32 * w ? 1 : 0;
  }
  return alice_bit;
}

namespace {

// Replicated +-1 vector as one all-zeros/all-ones word per coordinate.
std::vector<std::uint64_t> replicate_mask(const SignVector& v,
                                          const std::vector<std::uint32_t>& counts) {
  std::vector<std::uint64_t> mask;
  if (counts.empty()) {
    mask.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mask[i] = v[i] < 0 ? ~0ull : 0ull;
    return mask;
  }
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("gip: zero total weight");
  if (total > kGipReplicationCap)
    throw std::invalid_argument("gip: replication cap exceeded");
  mask.reserve(total);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::uint32_t c = 0; c < counts[i]; ++c)
      mask.push_back(v[i] < 0 ? ~0ull : 0ull);
  return mask;
}

}  // namespace

GipEstimate gip_estimate(const SignVector& u,
                         const std::vector<SignVector>& targets,
                         const std::vector<std::uint32_t>& weight_counts,
                         double theta,
                         const samplers::RandomnessSource& source,
                         unsigned workers, double rep_constant) {
  if (source.kind != samplers::RandomnessSource::Kind::Isr)
    throw std::invalid_argument("gip_estimate needs an ISR source");
  if (targets.empty()) throw std::invalid_argument("gip_estimate: no targets");
  if (!weight_counts.empty() && weight_counts.size() != u.size())
    throw std::invalid_argument("gip_estimate: weight shape mismatch");
  for (const auto& t : targets)
    if (t.size() != u.size())
      throw std::invalid_argument("gip_estimate: target shape mismatch");

  const double rho = source.rho;
  const std::uint64_t m =
      gip_repetitions(theta, rho, targets.size(), rep_constant);

  const auto alice_mask = replicate_mask(u, weight_counts);
  std::vector<std::vector<std::uint64_t>> target_masks;
  target_masks.reserve(targets.size());
  for (const auto& t : targets)
    target_masks.push_back(replicate_mask(t, weight_counts));

  const std::size_t nt = targets.size();
  const std::uint64_t nblocks = (m + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::vector<std::uint64_t>> agree_part(
      nblocks, std::vector<std::uint64_t>(nt, 0));
  std::vector<std::vector<std::uint8_t>> bits_part(nblocks);

  run_blocks(m, workers, [&](const BlockRange& br) {
    IsrBlockKernel kernel(rho, source.seed_a, alice_mask.size());
    std::vector<int> signs(nt);
    auto& agree = agree_part[br.index];
    auto& bits = bits_part[br.index];
    bits.resize(br.end - br.begin);
    for (std::uint64_t rep = br.begin; rep < br.end; ++rep) {
      const int ab = kernel.run_rep(rep, alice_mask, target_masks, signs.data());
      bits[rep - br.begin] = static_cast<std::uint8_t>(ab);
      for (std::size_t j = 0; j < nt; ++j)
        if (signs[j] == ab) ++agree[j];
    }
  });

  GipEstimate out;
  out.repetitions = m;
  out.theta = theta;
  out.rho = rho;
  out.alice_message = BitVector(m);
  std::vector<std::uint64_t> agree(nt, 0);
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    for (std::size_t j = 0; j < nt; ++j) agree[j] += agree_part[b][j];
    const std::uint64_t base = b * kTrialBlock;
    for (std::size_t i = 0; i < bits_part[b].size(); ++i)
      out.alice_message.set(base + i, bits_part[b][i]);
  }

  const double rho_eff = verifiers::effective_correlation(rho);
  out.estimates.resize(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    const double p_hat = static_cast<double>(agree[j]) / static_cast<double>(m);
    double est = std::cos(M_PI * (1.0 - p_hat)) / rho_eff;
    est = std::min(1.0 + theta, std::max(-1.0 - theta, est));
    out.estimates[j] = est;
  }
  return out;
}

}  // namespace uncertlab::protocols
