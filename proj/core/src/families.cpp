#include "uncertlab/families.hpp"

namespace uncertlab::functions {

int subset_majority(const IndexSubset& s, const SignVector& x,
                    const SignVector& y) {
  if (s.universe_size() != x.size() || x.size() != y.size())
    throw std::invalid_argument("subset_majority: length mismatch");
  // sum_{i in S} X_i Y_i = |S| - 2 * |{i in S : X_i != Y_i}|
  const BitVector diff = x.as_bits() ^ y.as_bits();
  std::int64_t disagreements = 0;
  auto dw = diff.words();
  const BitVector mask = s.mask();
  auto mw = mask.words();
  for (std::size_t i = 0; i < dw.size(); ++i)
    disagreements += std::popcount(dw[i] & mw[i]);
  return sign_bit(static_cast<std::int64_t>(s.size()) - 2 * disagreements);
}

int xor_parity(const IndexSubset& s, const BitVector& x, const BitVector& y) {
  if (s.universe_size() != x.size() || x.size() != y.size())
    throw std::invalid_argument("xor_parity: length mismatch");
  return f2_inner(s, x) ^ f2_inner(s, y);
}

int maj_subset_parity(const SubsetFamily& t, const BitBlockString& x,
                      const BitBlockString& y) {
  if (t.block_count() != x.block_count() || t.block_size() != x.block_size() ||
      x.block_count() != y.block_count() || x.block_size() != y.block_size())
    throw std::invalid_argument("maj_subset_parity: shape mismatch");
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < t.block_count(); ++i) {
    const int parity =
        f2_inner(t.block(i), x.block(i)) ^ f2_inner(t.block(i), y.block(i));
    sum += parity ? -1 : +1;
  }
  return sign_bit(sum);
}

int hd_threshold(std::uint32_t k, const BitVector& u, const BitVector& v) {
  if (u.size() != k || v.size() != k)
    throw std::invalid_argument("hd_threshold: length mismatch");
  return hamming_distance(u, v) >= k / 2 ? 1 : 0;
}

int composed_parity_hd(const SubsetFamily& t, const BitBlockString& x,
                       const BitBlockString& y) {
  const auto k = static_cast<std::uint32_t>(t.block_count());
  return hd_threshold(k, block_parities(t, x), block_parities(t, y));
}

void FunctionSpec::validate() const {
  if (const auto* g = std::get_if<GapInnerProductSpec>(&v_)) {
    if (!(g->c > g->s))
      throw std::invalid_argument("gap inner product requires c > s");
    if (g->c > 1.0 || g->s < -1.0)
      throw std::invalid_argument("gap inner product thresholds in [-1,1]");
  }
}

namespace {

SignVector signs_of(const BitVector& b) { return SignVector::from_bits(b); }

}  // namespace

int FunctionSpec::evaluate(const samplers::Draw& draw) const {
  return std::visit(
      [&](const auto& spec) -> int {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, SubsetMajoritySpec>) {
          if (draw.x.block_count() != 1)
            throw std::invalid_argument("subset majority expects one block");
          return uncertlab::functions::subset_majority(
              spec.subset, signs_of(draw.x.block(0)), signs_of(draw.y.block(0)));
        } else if constexpr (std::is_same_v<T, XorParitySpec>) {
          if (draw.x.block_count() != 1)
            throw std::invalid_argument("xor parity expects one block");
          return uncertlab::functions::xor_parity(spec.subset, draw.x.block(0),
                                                  draw.y.block(0));
        } else if constexpr (std::is_same_v<T, MajOfSubsetParitySpec>) {
          return maj_subset_parity(spec.family, draw.x, draw.y);
        } else if constexpr (std::is_same_v<T, HammingThresholdSpec>) {
          if (draw.x.block_count() != spec.k || draw.x.block_size() != 1)
            throw std::invalid_argument(
                "hamming threshold expects k blocks of one bit");
          BitVector u(spec.k), v(spec.k);
          for (std::uint32_t i = 0; i < spec.k; ++i) {
            u.set(i, draw.x.block(i).get(0));
            v.set(i, draw.y.block(i).get(0));
          }
          return hd_threshold(spec.k, u, v);
        } else {
          static_assert(std::is_same_v<T, GapInnerProductSpec>);
          const auto& xs = draw.x.block(0);
          const auto& ys = draw.y.block(0);
          if (xs.size() != spec.d)
            throw std::invalid_argument("gap inner product: dimension");
          const double agree =
              1.0 - 2.0 * static_cast<double>(hamming_distance(xs, ys)) /
                        static_cast<double>(spec.d);
          if (agree >= spec.c) return 1;
          if (agree <= spec.s) return 0;
          throw std::domain_error(
              "gap inner product evaluated outside the promise");
        }
      },
      v_);
}

void FunctionSpec::check_domain(const samplers::DistributionSpec& dist) const {
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, SubsetMajoritySpec> ||
                      std::is_same_v<T, XorParitySpec>) {
          if (dist.k != 1 || spec.subset.universe_size() != dist.n)
            throw std::invalid_argument("function/distribution domain mismatch");
        } else if constexpr (std::is_same_v<T, MajOfSubsetParitySpec>) {
          if (spec.family.block_count() != dist.k ||
              spec.family.block_size() != dist.n)
            throw std::invalid_argument("function/distribution domain mismatch");
        } else if constexpr (std::is_same_v<T, HammingThresholdSpec>) {
          if (dist.k != spec.k || dist.n != 1)
            throw std::invalid_argument("function/distribution domain mismatch");
        } else {
          static_assert(std::is_same_v<T, GapInnerProductSpec>);
          if (dist.k != 1 || dist.n != spec.d)
            throw std::invalid_argument("function/distribution domain mismatch");
        }
      },
      v_);
}

}  // namespace uncertlab::functions
