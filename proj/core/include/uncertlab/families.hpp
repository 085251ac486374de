#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>

#include "uncertlab/bits.hpp"
#include "uncertlab/distributions.hpp"
#include "uncertlab/math.hpp"

namespace uncertlab::functions {

// Sign(sum_{i in S} X_i * Y_i) over {-1,+1} inputs. Sign(0) = 1, so the
// empty-subset value is 1.
int subset_majority(const IndexSubset& s, const SignVector& x,
                    const SignVector& y);

// <S, x XOR y> over F2.
int xor_parity(const IndexSubset& s, const BitVector& x, const BitVector& y);

// Sign(sum_{i in [k]} (-1)^{<T^(i), x^(i) XOR y^(i)>}), sum over the reals.
int maj_subset_parity(const SubsetFamily& t, const BitBlockString& x,
                      const BitBlockString& y);

// 1 iff hamming_distance(u, v) >= floor(k/2).
int hd_threshold(std::uint32_t k, const BitVector& u, const BitVector& v);

// The parity-composed target expressed through its block parities:
// hd_threshold(k, (<T^(i), x^(i)>)_i, (<T^(i), y^(i)>)_i). This is the value
// the parity-conditioned simulation recovers exactly.
int composed_parity_hd(const SubsetFamily& t, const BitBlockString& x,
                       const BitBlockString& y);

inline BitVector block_parities(const SubsetFamily& t, const BitBlockString& x) {
  if (t.block_count() != x.block_count() || t.block_size() != x.block_size())
    throw std::invalid_argument("block_parities: shape mismatch");
  BitVector p(t.block_count());
  for (std::size_t i = 0; i < t.block_count(); ++i)
    p.set(i, f2_inner(t.block(i), x.block(i)));
  return p;
}

// Parameterized family members, evaluable on draws of a matching
// DistributionSpec.
struct SubsetMajoritySpec {
  IndexSubset subset;
};
struct XorParitySpec {
  IndexSubset subset;
};
struct MajOfSubsetParitySpec {
  SubsetFamily family;
};
struct HammingThresholdSpec {
  std::uint32_t k;
};
// Promise problem: distinguish average agreement >= c from <= s.
struct GapInnerProductSpec {
  double c;
  double s;
  std::uint32_t d;
};

class FunctionSpec {
 public:
  using Variant = std::variant<SubsetMajoritySpec, XorParitySpec,
                               MajOfSubsetParitySpec, HammingThresholdSpec,
                               GapInnerProductSpec>;

  FunctionSpec(Variant v) : v_(std::move(v)) { validate(); }

  static FunctionSpec subset_majority(IndexSubset s) {
    return FunctionSpec(SubsetMajoritySpec{std::move(s)});
  }
  static FunctionSpec xor_parity(IndexSubset s) {
    return FunctionSpec(XorParitySpec{std::move(s)});
  }
  static FunctionSpec maj_of_subset_parity(SubsetFamily f) {
    return FunctionSpec(MajOfSubsetParitySpec{std::move(f)});
  }
  static FunctionSpec hamming_threshold(std::uint32_t k) {
    return FunctionSpec(HammingThresholdSpec{k});
  }
  static FunctionSpec gap_inner_product(double c, double s, std::uint32_t d) {
    return FunctionSpec(GapInnerProductSpec{c, s, d});
  }

  const Variant& variant() const { return v_; }

  // Evaluate on a draw from `dist`; throws on domain mismatch.
  int evaluate(const samplers::Draw& draw) const;

  // Checks shape compatibility against a distribution spec.
  void check_domain(const samplers::DistributionSpec& dist) const;

 private:
  void validate() const;
  Variant v_;
};

}  // namespace uncertlab::functions
