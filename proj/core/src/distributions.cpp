#include "uncertlab/distributions.hpp"

#include <cmath>

#include "uncertlab/math.hpp"

namespace uncertlab::samplers {

namespace {

BitVector noisy_copy(const BitVector& z, double rate, Rng& rng) {
  BitVector out = z;
  if (rate == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (rng.bernoulli(rate)) out.flip(i);
  return out;
}

BitBlockString random_blocks(std::uint32_t k, std::uint32_t n, Rng& rng) {
  std::vector<BitVector> blocks;
  blocks.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i)
    blocks.push_back(BitVector::random(n, rng));
  return BitBlockString(std::move(blocks));
}

BitBlockString noisy_blocks(const BitBlockString& z, double rate, Rng& rng) {
  std::vector<BitVector> blocks;
  blocks.reserve(z.block_count());
  for (std::size_t i = 0; i < z.block_count(); ++i)
    blocks.push_back(noisy_copy(z.block(i), rate, rng));
  return BitBlockString(std::move(blocks));
}

SubsetFamily family_from_masks(const std::vector<BitVector>& masks) {
  std::vector<IndexSubset> blocks;
  blocks.reserve(masks.size());
  for (const auto& m : masks) blocks.push_back(IndexSubset::from_mask(m));
  return SubsetFamily(std::move(blocks),
                      static_cast<std::uint32_t>(masks[0].size()));
}

std::pair<SubsetFamily, SubsetFamily> sample_subset_noise(std::uint32_t k,
                                                          std::uint32_t n,
                                                          double q, Rng& rng) {
  std::vector<BitVector> s_masks, t_masks;
  s_masks.reserve(k);
  t_masks.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    BitVector s = BitVector::random(n, rng);
    t_masks.push_back(noisy_copy(s, q, rng));
    s_masks.push_back(std::move(s));
  }
  return {family_from_masks(s_masks), family_from_masks(t_masks)};
}

}  // namespace

Draw sample(const DistributionSpec& spec, Rng& rng) {
  Draw d;
  switch (spec.kind) {
    case DistKind::UniformPairs: {
      d.x = BitBlockString({BitVector::random(spec.n, rng)});
      d.y = BitBlockString({BitVector::random(spec.n, rng)});
      return d;
    }
    case DistKind::NoisyPairs: {
      d.x = random_blocks(spec.k, spec.n, rng);
      d.y = noisy_blocks(d.x, spec.noise, rng);
      return d;
    }
    case DistKind::SubsetNoise: {
      auto [s, t] = sample_subset_noise(spec.k, spec.n, spec.noise, rng);
      d.S = std::move(s);
      d.T = std::move(t);
      return d;
    }
    case DistKind::NuEpsilon:
    case DistKind::KappaEpsilon: {
      auto [s, t] = sample_subset_noise(spec.k, spec.n, spec.noise, rng);
      d.S = std::move(s);
      d.T = std::move(t);
      d.x = random_blocks(spec.k, spec.n, rng);
      d.y = noisy_blocks(d.x, spec.pair_noise_rate(), rng);
      return d;
    }
    case DistKind::ConditionedNoisy: {
      BitVector u(spec.k), v(spec.k);
      for (std::uint32_t i = 0; i < spec.k; ++i) {
        u.set(i, rng.next_bit());
        v.set(i, rng.next_bit());
      }
      auto cd = sample_conditioned(spec.t_hat, spec.noise, u, v, rng);
      d.x = std::move(cd.x);
      d.y = std::move(cd.y);
      return d;
    }
  }
  throw std::logic_error("unreachable");
}

ConditionedDraw sample_conditioned(const SubsetFamily& t_hat, double eps,
                                   const BitVector& u, const BitVector& v,
                                   Rng& rng) {
  const auto k = t_hat.block_count();
  const auto n = t_hat.block_size();
  if (u.size() != k || v.size() != k)
    throw std::invalid_argument("sample_conditioned: |U| = |V| = k required");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("sample_conditioned: eps in (0,1)");
  for (std::size_t i = 0; i < k; ++i) {
    if (t_hat.block(i).size() == 0 && (u.get(i) || v.get(i)))
      throw std::invalid_argument(
          "sample_conditioned: empty block forces parity 0, conditioning on 1 "
          "is unsatisfiable");
  }

  std::vector<BitVector> z_blocks, x_blocks, y_blocks;
  z_blocks.reserve(k);
  x_blocks.reserve(k);
  y_blocks.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    BitVector z = BitVector::random(n, rng);
    // Rejection per block keeps the conditional law exact; acceptance
    // probability is (1 +- (1-2eps)^|T|)/2, about 1/2 for typical blocks.
    BitVector x, y;
    for (;;) {
      x = noisy_copy(z, eps, rng);
      if (f2_inner(t_hat.block(i), x) == u.get(i)) break;
    }
    for (;;) {
      y = noisy_copy(z, eps, rng);
      if (f2_inner(t_hat.block(i), y) == v.get(i)) break;
    }
    z_blocks.push_back(std::move(z));
    x_blocks.push_back(std::move(x));
    y_blocks.push_back(std::move(y));
  }
  return {BitBlockString(std::move(z_blocks)),
          BitBlockString(std::move(x_blocks)),
          BitBlockString(std::move(y_blocks))};
}

std::pair<BitVector, BitVector> isr_streams(double rho, std::size_t length,
                                            std::uint64_t shared_seed) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("isr_streams: rho in [0,1]");
  Rng rng = Rng::substream(shared_seed, {tag_hash("isr-streams")});
  BitVector r = BitVector::random(length, rng);
  BitVector rp = noisy_copy(r, (1.0 - rho) / 2.0, rng);
  return {std::move(r), std::move(rp)};
}

bool is_typical(const SubsetFamily& t_hat) {
  const double n = t_hat.block_size();
  for (const auto& b : t_hat.blocks()) {
    const double sz = static_cast<double>(b.size());
    if (sz < n / 3.0 || sz > 2.0 * n / 3.0) return false;
  }
  return true;
}

SubsetFamily sample_typical_family(std::uint32_t k, std::uint32_t n, Rng& rng) {
  for (;;) {
    std::vector<BitVector> masks;
    masks.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i)
      masks.push_back(BitVector::random(n, rng));
    SubsetFamily f = family_from_masks(masks);
    if (is_typical(f)) return f;
  }
}

BitBlockString unpack_blocks(std::uint64_t bits, std::uint32_t k,
                             std::uint32_t n) {
  BitBlockString s(k, n);
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      s.block_mut(i).set(j, (bits >> (i * n + j)) & 1u);
  return s;
}

std::uint64_t pack_blocks(const BitBlockString& s) {
  std::uint64_t bits = 0;
  const auto k = s.block_count(), n = s.block_size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s.block(i).get(j)) bits |= 1ull << (i * n + j);
  return bits;
}

SubsetFamily unpack_family(std::uint64_t bits, std::uint32_t k,
                           std::uint32_t n) {
  std::vector<BitVector> masks;
  masks.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    BitVector m(n);
    for (std::uint32_t j = 0; j < n; ++j) m.set(j, (bits >> (i * n + j)) & 1u);
    masks.push_back(std::move(m));
  }
  return family_from_masks(masks);
}

std::uint64_t pack_family(const SubsetFamily& f) {
  std::uint64_t bits = 0;
  const auto k = f.block_count(), n = static_cast<std::size_t>(f.block_size());
  for (std::size_t i = 0; i < k; ++i)
    for (auto idx : f.block(i).indices())
      bits |= 1ull << (i * n + (idx - 1));
  return bits;
}

namespace {

double flip_weight(std::uint64_t a, std::uint64_t b, std::uint32_t len,
                   double rate) {
  const std::uint64_t mask = len >= 64 ? ~0ull : ((1ull << len) - 1);
  const auto d = static_cast<std::uint32_t>(std::popcount((a ^ b) & mask));
  return std::pow(rate, d) * std::pow(1.0 - rate, len - d);
}

// Exact one-block law of the parity-tied construction, marginal over (x,y)
// with U, V uniform and Z summed out. P[<T,X'> = p | Z] has the closed form
// (1 +- gamma)/2 with gamma = (1-2eps)^|T|; Z is folded in with a two-state
// transfer over its parity on T.
std::vector<double> conditioned_block_law(const IndexSubset& t, double eps,
                                          std::uint32_t n) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("conditioned law: eps in (0,1)");
  const double gamma = std::pow(1.0 - 2.0 * eps, static_cast<double>(t.size()));
  const double acc[2] = {(1.0 + gamma) / 2.0, (1.0 - gamma) / 2.0};
  std::uint64_t tmask = 0;
  for (auto i : t.indices()) tmask |= 1ull << (i - 1);

  const std::uint64_t tn = 1ull << n;
  std::vector<double> law(tn * tn, 0.0);
  for (std::uint64_t x = 0; x < tn; ++x) {
    const int px = std::popcount(x & tmask) & 1;
    for (std::uint64_t y = 0; y < tn; ++y) {
      const int py = std::popcount(y & tmask) & 1;
      double w[2] = {1.0, 0.0};  // w[pz] = sum over z-prefixes with parity pz
      for (std::uint32_t j = 0; j < n; ++j) {
        const int xb = static_cast<int>((x >> j) & 1);
        const int yb = static_cast<int>((y >> j) & 1);
        const bool in_t = (tmask >> j) & 1;
        double nxt[2] = {0.0, 0.0};
        for (int zb = 0; zb < 2; ++zb) {
          const double wj =
              (xb == zb ? 1.0 - eps : eps) * (yb == zb ? 1.0 - eps : eps);
          for (int pz = 0; pz < 2; ++pz) nxt[in_t ? (pz ^ zb) : pz] += w[pz] * wj;
        }
        w[0] = nxt[0];
        w[1] = nxt[1];
      }
      double p = 0.0;
      for (int pz = 0; pz < 2; ++pz)
        p += w[pz] * 0.25 / (acc[px ^ pz] * acc[py ^ pz]);
      law[x * tn + y] = std::ldexp(p, -static_cast<int>(n));
    }
  }
  return law;
}

}  // namespace

std::uint64_t support_size(const DistributionSpec& spec) {
  const std::uint64_t kn = static_cast<std::uint64_t>(spec.k) * spec.n;
  if (kn >= 31) return ~0ull;  // saturate; always over budget
  const std::uint64_t strings = 1ull << kn;
  switch (spec.kind) {
    case DistKind::UniformPairs:
      return 1ull << (2 * spec.n);
    case DistKind::NoisyPairs:
    case DistKind::SubsetNoise:
    case DistKind::ConditionedNoisy:
      return strings * strings;
    case DistKind::NuEpsilon:
    case DistKind::KappaEpsilon:
      return (kn >= 15) ? ~0ull : strings * strings * strings * strings;
  }
  return ~0ull;
}

void for_each_support_atom(const DistributionSpec& spec, std::uint64_t budget,
                           const SupportVisitor& visit) {
  const std::uint64_t sz = support_size(spec);
  if (sz == ~0ull || sz > budget)
    throw std::length_error("enumerate_support: budget exceeded");
  const std::uint32_t k = spec.k, n = spec.n;
  const std::uint64_t kn = static_cast<std::uint64_t>(k) * n;
  const std::uint64_t strings = 1ull << kn;
  const auto len = static_cast<std::uint32_t>(kn);

  Draw d;
  switch (spec.kind) {
    case DistKind::UniformPairs: {
      const double p = 1.0 / static_cast<double>(sz);
      for (std::uint64_t x = 0; x < (1ull << n); ++x) {
        d.x = unpack_blocks(x, 1, n);
        for (std::uint64_t y = 0; y < (1ull << n); ++y) {
          d.y = unpack_blocks(y, 1, n);
          visit(d, p);
        }
      }
      return;
    }
    case DistKind::NoisyPairs: {
      const double base = 1.0 / static_cast<double>(strings);
      for (std::uint64_t x = 0; x < strings; ++x) {
        d.x = unpack_blocks(x, k, n);
        for (std::uint64_t y = 0; y < strings; ++y) {
          d.y = unpack_blocks(y, k, n);
          visit(d, base * flip_weight(x, y, len, spec.noise));
        }
      }
      return;
    }
    case DistKind::SubsetNoise: {
      const double base = 1.0 / static_cast<double>(strings);
      for (std::uint64_t s = 0; s < strings; ++s) {
        d.S = unpack_family(s, k, n);
        for (std::uint64_t t = 0; t < strings; ++t) {
          d.T = unpack_family(t, k, n);
          visit(d, base * flip_weight(s, t, len, spec.noise));
        }
      }
      return;
    }
    case DistKind::NuEpsilon:
    case DistKind::KappaEpsilon: {
      const double rate = spec.pair_noise_rate();
      const double base = 1.0 / static_cast<double>(strings);
      for (std::uint64_t s = 0; s < strings; ++s) {
        d.S = unpack_family(s, k, n);
        for (std::uint64_t t = 0; t < strings; ++t) {
          d.T = unpack_family(t, k, n);
          const double pst = base * flip_weight(s, t, len, spec.noise);
          for (std::uint64_t x = 0; x < strings; ++x) {
            d.x = unpack_blocks(x, k, n);
            for (std::uint64_t y = 0; y < strings; ++y) {
              d.y = unpack_blocks(y, k, n);
              visit(d, pst * base * flip_weight(x, y, len, rate));
            }
          }
        }
      }
      return;
    }
    case DistKind::ConditionedNoisy: {
      std::vector<std::vector<double>> laws;
      laws.reserve(k);
      for (std::uint32_t i = 0; i < k; ++i)
        laws.push_back(
            conditioned_block_law(spec.t_hat.block(i), spec.noise, n));
      const std::uint64_t tn = 1ull << n;
      for (std::uint64_t x = 0; x < strings; ++x) {
        d.x = unpack_blocks(x, k, n);
        for (std::uint64_t y = 0; y < strings; ++y) {
          d.y = unpack_blocks(y, k, n);
          double p = 1.0;
          for (std::uint32_t i = 0; i < k; ++i) {
            const std::uint64_t xb = (x >> (i * n)) & (tn - 1);
            const std::uint64_t yb = (y >> (i * n)) & (tn - 1);
            p *= laws[i][xb * tn + yb];
          }
          visit(d, p);
        }
      }
      return;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<SupportAtom> enumerate_support(const DistributionSpec& spec,
                                           std::uint64_t budget) {
  std::vector<SupportAtom> out;
  const std::uint64_t sz = support_size(spec);
  if (sz != ~0ull && sz <= budget) out.reserve(sz);
  for_each_support_atom(spec, budget, [&](const Draw& d, double p) {
    out.push_back({d, p});
  });
  return out;
}

}  // namespace uncertlab::samplers
