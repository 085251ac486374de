#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uncertlab/distance.hpp"
#include "uncertlab/families.hpp"

using namespace uncertlab;
using namespace uncertlab::functions;

namespace {

SignVector signs(const std::string& pm) {
  SignVector v(pm.size());
  for (std::size_t i = 0; i < pm.size(); ++i) v.set(i, pm[i] == '+' ? 1 : -1);
  return v;
}

IndexSubset range_subset(std::uint32_t from, std::uint32_t to, std::uint32_t n) {
  std::vector<std::uint32_t> v;
  for (std::uint32_t i = from; i <= to; ++i) v.push_back(i);
  return IndexSubset(std::move(v), n);
}

}  // namespace

TEST_CASE("subset majority") {
  CHECK(subset_majority(IndexSubset({}, 3), signs("+++"), signs("---")) == 1);
  CHECK(subset_majority(IndexSubset({1, 2}, 3), signs("+++"), signs("+++")) == 1);
  CHECK(subset_majority(IndexSubset({1}, 2), signs("+-"), signs("-+")) == 0);
  CHECK_THROWS_AS(subset_majority(IndexSubset({1}, 3), signs("++"), signs("++")),
                  std::invalid_argument);
}

TEST_CASE("xor parity") {
  const auto x = BitVector::from_string("10");
  const auto y = BitVector::from_string("01");
  CHECK(xor_parity(IndexSubset({1, 2}, 2), x, x) == 0);
  CHECK(xor_parity(IndexSubset({1, 2}, 2), x, y) == 0);
  CHECK(xor_parity(IndexSubset({1}, 2), x, y) == 1);
}

TEST_CASE("maj of subset parity: basic values") {
  const std::uint32_t k = 3, n = 2;
  const SubsetFamily empties(
      {IndexSubset({}, n), IndexSubset({}, n), IndexSubset({}, n)}, n);
  Rng rng(1);
  for (int it = 0; it < 10; ++it) {
    std::vector<BitVector> xb, yb;
    for (std::uint32_t i = 0; i < k; ++i) {
      xb.push_back(BitVector::random(n, rng));
      yb.push_back(BitVector::random(n, rng));
    }
    const BitBlockString x(xb), y(yb);
    CHECK(maj_subset_parity(empties, x, y) == 1);  // every term +1
    CHECK(maj_subset_parity(empties, x, x) == 1);  // x = y
  }
}

TEST_CASE("maj of subset parity at k=1 complements xor parity") {
  // Sign(+1)=1 and Sign(-1)=0 make the one-block case the complement;
  // verified exhaustively for n <= 3.
  for (std::uint32_t n = 1; n <= 3; ++n) {
    for (std::uint64_t smask = 0; smask < (1ull << n); ++smask) {
      std::vector<std::uint32_t> elems;
      for (std::uint32_t j = 0; j < n; ++j)
        if ((smask >> j) & 1u) elems.push_back(j + 1);
      const IndexSubset s(elems, n);
      const SubsetFamily fam({s}, n);
      for (std::uint64_t xa = 0; xa < (1ull << n); ++xa)
        for (std::uint64_t ya = 0; ya < (1ull << n); ++ya) {
          BitVector x(n), y(n);
          for (std::uint32_t j = 0; j < n; ++j) {
            x.set(j, (xa >> j) & 1u);
            y.set(j, (ya >> j) & 1u);
          }
          const BitBlockString bx({x}), by({y});
          CHECK(maj_subset_parity(fam, bx, by) == 1 - xor_parity(s, x, y));
        }
    }
  }
}

TEST_CASE("hamming threshold") {
  CHECK(hd_threshold(3, BitVector::from_string("000"),
                     BitVector::from_string("011")) == 1);
  CHECK(hd_threshold(3, BitVector::from_string("010"),
                     BitVector::from_string("010")) == 0);
  CHECK(hd_threshold(2, BitVector::from_string("00"),
                     BitVector::from_string("01")) == 1);
  // symmetric, and complement-invariant
  Rng rng(2);
  for (int it = 0; it < 100; ++it) {
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(10));
    BitVector u = BitVector::random(k, rng), v = BitVector::random(k, rng);
    const int val = hd_threshold(k, u, v);
    CHECK(hd_threshold(k, v, u) == val);
    BitVector uc = u, vc = v;
    for (std::uint32_t i = 0; i < k; ++i) {
      uc.flip(i);
      vc.flip(i);
    }
    CHECK(hd_threshold(k, uc, vc) == val);
  }
}

TEST_CASE("composed evaluator uses block parities only") {
  Rng rng(3);
  const std::uint32_t k = 3, n = 5;
  const SubsetFamily t(
      {range_subset(1, 2, n), range_subset(2, 4, n), range_subset(3, 5, n)}, n);
  for (int it = 0; it < 50; ++it) {
    std::vector<BitVector> xb, yb;
    for (std::uint32_t i = 0; i < k; ++i) {
      xb.push_back(BitVector::random(n, rng));
      yb.push_back(BitVector::random(n, rng));
    }
    const BitBlockString x(xb), y(yb);
    CHECK(composed_parity_hd(t, x, y) ==
          hd_threshold(k, block_parities(t, x), block_parities(t, y)));
  }
}

TEST_CASE("exact distance from the spec's worked pair") {
  // independent oracle: enumerate all 64 sign assignments by hand here
  const IndexSubset s = range_subset(1, 2, 3);
  const IndexSubset t = range_subset(1, 3, 3);
  std::uint32_t disagreements = 0;
  for (std::uint64_t xa = 0; xa < 8; ++xa)
    for (std::uint64_t ya = 0; ya < 8; ++ya) {
      int ssum = 0, tsum = 0;
      for (std::uint32_t j = 0; j < 3; ++j) {
        const int prod = (((xa >> j) ^ (ya >> j)) & 1u) ? -1 : 1;
        if (j < 2) ssum += prod;
        tsum += prod;
      }
      if ((ssum >= 0) != (tsum >= 0)) ++disagreements;
    }
  CHECK(disagreements == 16);  // frozen: 16/64 = 0.25

  const auto fs = FunctionSpec::subset_majority(s);
  const auto ft = FunctionSpec::subset_majority(t);
  const auto dist = samplers::DistributionSpec::uniform_pairs(3);
  CHECK(distance_exact(fs, ft, dist) == doctest::Approx(0.25));
  CHECK(distance_exact(fs, fs, dist) == doctest::Approx(0.0));
}

TEST_CASE("distance budget is fail-closed") {
  const auto f = FunctionSpec::subset_majority(range_subset(1, 2, 30));
  CHECK_THROWS_AS(distance_exact(f, f, samplers::DistributionSpec::uniform_pairs(30)),
                  std::length_error);
}

TEST_CASE("monte carlo distance: identical functions") {
  const auto f = FunctionSpec::xor_parity(range_subset(1, 2, 4));
  const auto rep = distance_monte_carlo(
      f, f, samplers::DistributionSpec::noisy_pairs(1, 4, 0.3), 2000, 9);
  CHECK(rep.primary().value == 0.0);
  CHECK(rep.primary().stderr_ == 0.0);
}

TEST_CASE("monte carlo matches exact within 4 standard errors") {
  const auto f = FunctionSpec::xor_parity(range_subset(1, 2, 5));
  const auto g = FunctionSpec::xor_parity(range_subset(2, 3, 5));
  const auto dist = samplers::DistributionSpec::noisy_pairs(1, 5, 0.2);
  const double exact = distance_exact(f, g, dist);
  const auto rep = distance_monte_carlo(f, g, dist, 200000, 10, 2);
  CHECK(std::abs(rep.primary().value - exact) <= 4.0 * rep.primary().stderr_);
}

TEST_CASE("gap inner product promise") {
  const auto g = FunctionSpec::gap_inner_product(0.5, -0.5, 4);
  samplers::Draw d;
  d.x = BitBlockString({BitVector::from_string("0000")});
  d.y = BitBlockString({BitVector::from_string("0000")});
  CHECK(g.evaluate(d) == 1);  // agreement 1 >= c
  d.y = BitBlockString({BitVector::from_string("1111")});
  CHECK(g.evaluate(d) == 0);  // agreement -1 <= s
  d.y = BitBlockString({BitVector::from_string("1100")});
  CHECK_THROWS_AS(g.evaluate(d), std::domain_error);  // inside the gap
  CHECK_THROWS_AS(FunctionSpec::gap_inner_product(-0.5, 0.5, 4),
                  std::invalid_argument);
}
