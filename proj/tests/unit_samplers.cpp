#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "uncertlab/distributions.hpp"
#include "uncertlab/math.hpp"

using namespace uncertlab;
using namespace uncertlab::samplers;

namespace {

double total_mass(const DistributionSpec& spec) {
  double sum = 0.0;
  for_each_support_atom(spec, 1ull << 22,
                        [&](const Draw&, double p) { sum += p; });
  return sum;
}

// Independent oracle for the parity-tied law at one block: brute force over
// the shared string, the noise patterns, and the parity conditioning, using
// nothing from the sampler implementation.
std::map<std::pair<std::uint64_t, std::uint64_t>, double> brute_conditioned_law(
    const std::vector<std::uint32_t>& t_elems, std::uint32_t n, double eps) {
  std::uint64_t tmask = 0;
  for (auto e : t_elems) tmask |= 1ull << (e - 1);
  const std::uint64_t states = 1ull << n;
  auto noisy_prob = [&](std::uint64_t from, std::uint64_t to) {
    const int d = std::popcount(from ^ to);
    return std::pow(eps, d) * std::pow(1.0 - eps, static_cast<int>(n) - d);
  };
  auto parity = [&](std::uint64_t w) { return std::popcount(w & tmask) & 1; };

  std::map<std::pair<std::uint64_t, std::uint64_t>, double> law;
  for (std::uint64_t z = 0; z < states; ++z) {
    double z_mass[2] = {0.0, 0.0};  // normalizers per conditioned parity
    for (std::uint64_t w = 0; w < states; ++w) z_mass[parity(w)] += noisy_prob(z, w);
    for (int u = 0; u < 2; ++u) {
      for (int v = 0; v < 2; ++v) {
        for (std::uint64_t x = 0; x < states; ++x) {
          if (parity(x) != u) continue;
          for (std::uint64_t y = 0; y < states; ++y) {
            if (parity(y) != v) continue;
            law[{x, y}] += (1.0 / states) * 0.25 * (noisy_prob(z, x) / z_mass[u]) *
                           (noisy_prob(z, y) / z_mass[v]);
          }
        }
      }
    }
  }
  return law;
}

}  // namespace

TEST_CASE("noisy pairs: degenerate noise levels") {
  Rng rng(1);
  for (int it = 0; it < 20; ++it) {
    const auto same = sample(DistributionSpec::noisy_pairs(2, 5, 0.0), rng);
    CHECK(same.x == same.y);
    const auto flip = sample(DistributionSpec::noisy_pairs(2, 5, 1.0), rng);
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t j = 0; j < 5; ++j)
        CHECK(flip.x.block(b).get(j) != flip.y.block(b).get(j));
  }
}

TEST_CASE("subset noise flip rate") {
  // sample-mean oracle: empirical flip rate 0.3 +/- 0.005 over 1e5 bits
  Rng rng(2);
  const auto spec = DistributionSpec::subset_noise(10, 100, 0.3);
  std::uint64_t flips = 0, bits = 0;
  for (int it = 0; it < 100; ++it) {
    const auto d = sample(spec, rng);
    for (std::size_t b = 0; b < 10; ++b) {
      flips += hamming_distance(d.S.block(b).mask(), d.T.block(b).mask());
      bits += 100;
    }
  }
  const double rate = static_cast<double>(flips) / static_cast<double>(bits);
  CHECK(std::abs(rate - 0.3) < 0.005);
}

TEST_CASE("support enumeration: uniform pairs") {
  const auto atoms = enumerate_support(DistributionSpec::uniform_pairs(2));
  CHECK(atoms.size() == 16);
  for (const auto& a : atoms) CHECK(a.probability == doctest::Approx(1.0 / 16));
}

TEST_CASE("support enumeration: noisy pair point masses") {
  // direct computation: (1/2)(1-eta) on the diagonal, (1/2)eta off it
  const auto atoms = enumerate_support(DistributionSpec::noisy_pairs(1, 1, 0.25));
  REQUIRE(atoms.size() == 4);
  std::map<std::pair<int, int>, double> got;
  for (const auto& a : atoms)
    got[{a.draw.x.block(0).get(0), a.draw.y.block(0).get(0)}] = a.probability;
  CHECK(got[{0, 0}] == doctest::Approx(3.0 / 8));
  CHECK(got[{0, 1}] == doctest::Approx(1.0 / 8));
  CHECK(got[{1, 0}] == doctest::Approx(1.0 / 8));
  CHECK(got[{1, 1}] == doctest::Approx(3.0 / 8));
}

TEST_CASE("support masses sum to one") {
  const SubsetFamily t_hat({IndexSubset({1, 2}, 4)}, 4);
  CHECK(total_mass(DistributionSpec::uniform_pairs(3)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_mass(DistributionSpec::noisy_pairs(2, 3, 0.2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_mass(DistributionSpec::subset_noise(2, 2, 0.35)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_mass(DistributionSpec::nu_epsilon(1, 2, 0.25)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_mass(DistributionSpec::kappa_epsilon(1, 2, 0.25)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_mass(DistributionSpec::conditioned_noisy(t_hat, 0.25)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(enumerate_support(DistributionSpec::uniform_pairs(20)),
                  std::length_error);
}

TEST_CASE("isr streams") {
  const auto [r1, rp1] = isr_streams(1.0, 1000, 7);
  CHECK(r1 == rp1);
  auto correlation = [](const BitVector& a, const BitVector& b) {
    double dot = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      dot += (a.get(i) == b.get(i)) ? 1.0 : -1.0;
    return dot / static_cast<double>(a.size());
  };
  const auto [r0, rp0] = isr_streams(0.0, 100000, 8);
  CHECK(std::abs(correlation(r0, rp0)) < 0.01);
  const auto [rh, rph] = isr_streams(0.5, 100000, 9);
  CHECK(std::abs(correlation(rh, rph) - 0.5) < 0.01);
  // deterministic in the shared seed
  const auto [ra, rpa] = isr_streams(0.5, 100, 11);
  const auto [rb, rpb] = isr_streams(0.5, 100, 11);
  CHECK(ra == rb);
  CHECK(rpa == rpb);
}

TEST_CASE("typicality: inclusive thirds") {
  auto family_of_size = [](std::uint32_t sz, std::uint32_t n) {
    std::vector<std::uint32_t> v;
    for (std::uint32_t i = 1; i <= sz; ++i) v.push_back(i);
    return SubsetFamily({IndexSubset(v, n)}, n);
  };
  CHECK(is_typical(family_of_size(3, 6)));
  CHECK(is_typical(family_of_size(2, 6)));  // 2 >= 6/3, boundary inclusive
  CHECK(is_typical(family_of_size(4, 6)));
  CHECK(!is_typical(family_of_size(1, 6)));
  CHECK(!is_typical(family_of_size(5, 6)));
  CHECK(!is_typical(family_of_size(0, 6)));
  Rng rng(3);
  const auto fam = sample_typical_family(4, 9, rng);
  CHECK(is_typical(fam));
}

TEST_CASE("conditioned sampling: parity postcondition and validation") {
  Rng rng(4);
  const SubsetFamily t_hat({IndexSubset({1, 2, 3}, 6), IndexSubset({2, 4}, 6)}, 6);
  for (int it = 0; it < 200; ++it) {
    BitVector u(2), v(2);
    u.set(0, rng.next_bit());
    u.set(1, rng.next_bit());
    v.set(0, rng.next_bit());
    v.set(1, rng.next_bit());
    const auto d = sample_conditioned(t_hat, 0.25, u, v, rng);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(f2_inner(t_hat.block(i), d.x.block(i)) == u.get(i));
      CHECK(f2_inner(t_hat.block(i), d.y.block(i)) == v.get(i));
    }
  }
  // empty block with a parity-1 condition is unsatisfiable
  const SubsetFamily with_empty({IndexSubset({}, 4)}, 4);
  BitVector one(1);
  one.set(0, true);
  CHECK_THROWS_AS(sample_conditioned(with_empty, 0.25, one, BitVector(1), rng),
                  std::invalid_argument);
}

TEST_CASE("conditioned law matches the brute-force oracle exactly and empirically") {
  const std::uint32_t n = 6;
  const std::vector<std::uint32_t> t_elems = {1, 3, 5};
  const double eps = 0.25;
  const auto oracle = brute_conditioned_law(t_elems, n, eps);

  const SubsetFamily t_hat({IndexSubset(t_elems, n)}, n);
  const auto spec = DistributionSpec::conditioned_noisy(t_hat, eps);
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> law;
  for_each_support_atom(spec, 1ull << 22, [&](const Draw& d, double p) {
    law[{pack_blocks(d.x), pack_blocks(d.y)}] += p;
  });
  REQUIRE(law.size() == oracle.size());
  for (const auto& [key, p] : oracle)
    CHECK(law.at(key) == doctest::Approx(p).epsilon(1e-10));

  // chi-squared acceptance at significance 0.01 for 1e6 draws
  Rng rng(5);
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
  const std::uint64_t trials = 1000000;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto d = sample(spec, rng);
    ++counts[{pack_blocks(d.x), pack_blocks(d.y)}];
  }
  double chi2 = 0.0;
  double df = 0.0;
  for (const auto& [key, p] : oracle) {
    const double expect = p * static_cast<double>(trials);
    const double obs =
        counts.count(key) ? static_cast<double>(counts.at(key)) : 0.0;
    chi2 += (obs - expect) * (obs - expect) / expect;
    df += 1.0;
  }
  // Wilson-Hilferty 0.99 quantile
  const double z = 2.3263478740408408;
  const double a = 2.0 / (9.0 * (df - 1.0));
  const double crit = (df - 1.0) * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
  CHECK(chi2 < crit);
}

TEST_CASE("sampling is a pure function of spec and seed") {
  const auto spec = DistributionSpec::nu_epsilon(2, 3, 0.2);
  Rng a(77), b(77);
  for (int i = 0; i < 20; ++i) {
    const auto da = sample(spec, a);
    const auto db = sample(spec, b);
    CHECK(da.x == db.x);
    CHECK(da.y == db.y);
    CHECK(da.S == db.S);
    CHECK(da.T == db.T);
  }
}
