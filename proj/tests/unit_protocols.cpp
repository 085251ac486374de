#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uncertlab/bruteforce.hpp"
#include "uncertlab/gip.hpp"
#include "uncertlab/protocols.hpp"
#include "uncertlab/uncertain.hpp"

using namespace uncertlab;
using namespace uncertlab::protocols;

namespace {

IndexSubset range_subset(std::uint32_t from, std::uint32_t to, std::uint32_t n) {
  std::vector<std::uint32_t> v;
  for (std::uint32_t i = from; i <= to; ++i) v.push_back(i);
  return IndexSubset(std::move(v), n);
}

}  // namespace

TEST_CASE("certain subset protocol: exhaustive agreement with the function") {
  for (std::uint32_t n = 1; n <= 4; ++n) {
    for (std::uint64_t tmask = 0; tmask < (1ull << n); ++tmask) {
      std::vector<std::uint32_t> elems;
      for (std::uint32_t j = 0; j < n; ++j)
        if ((tmask >> j) & 1u) elems.push_back(j + 1);
      const IndexSubset t(elems, n);
      for (std::uint64_t xa = 0; xa < (1ull << n); ++xa)
        for (std::uint64_t ya = 0; ya < (1ull << n); ++ya) {
          SignVector x(n), y(n);
          for (std::uint32_t j = 0; j < n; ++j) {
            x.set(j, (xa >> j) & 1u ? -1 : 1);
            y.set(j, (ya >> j) & 1u ? -1 : 1);
          }
          const auto run = certain_subset_protocol(t, x, y);
          CHECK(run.bits_communicated == t.size());
          CHECK(run.output == functions::subset_majority(t, x, y));
        }
    }
  }
  const auto empty_run = certain_subset_protocol(
      IndexSubset({}, 3), SignVector::all_plus(3), SignVector::all_plus(3));
  CHECK(empty_run.bits_communicated == 0);
  CHECK(empty_run.output == 1);
}

TEST_CASE("certain parity protocol: k bits and exhaustive agreement") {
  Rng rng(1);
  for (std::uint32_t k = 1; k <= 3; ++k) {
    for (std::uint32_t n = 1; n <= 3; ++n) {
      std::vector<IndexSubset> blocks;
      for (std::uint32_t i = 0; i < k; ++i)
        blocks.push_back(IndexSubset::from_mask(BitVector::random(n, rng)));
      const SubsetFamily s(blocks, n);
      for (std::uint64_t xa = 0; xa < (1ull << (k * n)); ++xa)
        for (std::uint64_t ya = 0; ya < (1ull << (k * n)); ++ya) {
          const auto x = samplers::unpack_blocks(xa, k, n);
          const auto y = samplers::unpack_blocks(ya, k, n);
          const auto run = certain_parity_protocol(s, x, y);
          CHECK(run.bits_communicated == k);
          CHECK(run.output == functions::maj_subset_parity(s, x, y));
          if (xa == ya) CHECK(run.output == 1);
        }
    }
  }
}

TEST_CASE("hash set recovery: exact cases") {
  const auto pub = samplers::RandomnessSource::pub(1234);
  const IndexSubset t = range_subset(5, 20, 64);
  const auto full = hash_set_recovery(t, t, 0.01, pub);
  if (!full.ambiguous) CHECK(full.recovered == t);
  const IndexSubset empty({}, 64);
  const auto none = hash_set_recovery(empty, t, 0.01, pub);
  CHECK(none.bits_communicated == 0);
  CHECK(none.recovered.size() == 0);
  CHECK_THROWS_AS(
      hash_set_recovery(range_subset(1, 2, 64), range_subset(5, 8, 64), 0.01, pub),
      std::invalid_argument);
  CHECK_THROWS_AS(hash_set_recovery(t, t, 0.01,
                                    samplers::RandomnessSource::priv(1, 2)),
                  std::invalid_argument);
}

TEST_CASE("hash set recovery: empirical failure under the union bound") {
  const std::uint32_t ell = 16, n = 4096;
  const double fp = 0.01;
  std::uint64_t failures = 0;
  const std::uint64_t trials = 10000;
  Rng rng(7);
  for (std::uint64_t i = 0; i < trials; ++i) {
    std::vector<std::uint32_t> elems;
    std::set<std::uint32_t> seen;
    while (elems.size() < ell) {
      const auto e = static_cast<std::uint32_t>(rng.below(n) + 1);
      if (seen.insert(e).second) elems.push_back(e);
    }
    std::sort(elems.begin(), elems.end());
    const IndexSubset t(elems, n);
    const auto res = hash_set_recovery(
        t, t, fp, samplers::RandomnessSource::pub(rng.next_u64()));
    if (res.ambiguous || !(res.recovered == t)) ++failures;
  }
  const double rate = static_cast<double>(failures) / trials;
  const double se = std::sqrt(std::max(rate * (1 - rate), 1e-8) / trials);
  CHECK(rate <= fp + 3 * se);
}

TEST_CASE("gip estimate: perfect correlation endpoints") {
  Rng rng(3);
  const SignVector u = SignVector::random(256, rng);
  SignVector neg(256);
  for (std::size_t i = 0; i < 256; ++i) neg.set(i, -u[i]);
  const auto src = samplers::RandomnessSource::isr(1.0, 99);
  const auto est = gip_estimate(u, {u, neg}, {}, 0.1, src);
  CHECK(std::abs(est.estimates[0] - 1.0) <= 0.1);
  CHECK(std::abs(est.estimates[1] + 1.0) <= 0.1);
  CHECK(est.alice_message.size() == est.repetitions);
  CHECK(est.repetitions == gip_repetitions(0.1, 1.0, 2));
}

TEST_CASE("gip estimate: rejects a zero-signal source") {
  Rng rng(4);
  const SignVector u = SignVector::random(64, rng);
  CHECK_THROWS_AS(
      gip_estimate(u, {u}, {}, 0.1, samplers::RandomnessSource::isr(0.0, 5)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      gip_estimate(u, {u}, {}, 0.1, samplers::RandomnessSource::pub(5)),
      std::invalid_argument);
}

TEST_CASE("gip estimate: weighted coordinates by replication") {
  Rng rng(5);
  // weight all mass on the first half where v agrees with u
  const std::uint32_t d = 64;
  const SignVector u = SignVector::random(d, rng);
  SignVector v(d);
  for (std::uint32_t i = 0; i < d; ++i)
    v.set(i, i < d / 2 ? u[i] : -u[i]);
  std::vector<std::uint32_t> weights(d, 0);
  for (std::uint32_t i = 0; i < d / 2; ++i) weights[i] = 3;
  const auto est = gip_estimate(u, {v}, weights, 0.1,
                                samplers::RandomnessSource::isr(1.0, 6));
  CHECK(std::abs(est.estimates[0] - 1.0) <= 0.1);
  // estimates stay inside [-1-theta, 1+theta]
  CHECK(est.estimates[0] <= 1.1);
  CHECK(est.estimates[0] >= -1.1);
}

TEST_CASE("gip message depends on the replication cap") {
  Rng rng(6);
  const SignVector u = SignVector::random(4, rng);
  std::vector<std::uint32_t> heavy(4, 1u << 30);
  CHECK_THROWS_AS(gip_estimate(u, {u}, heavy, 0.2,
                               samplers::RandomnessSource::isr(1.0, 7)),
                  std::invalid_argument);
}

TEST_CASE("one-way property: message is a pure function of Alice's side") {
  Rng rng(8);
  const SignVector u = SignVector::random(128, rng);
  const auto src = samplers::RandomnessSource::isr(0.5, 4242);
  const auto a = gip_estimate(u, {SignVector::random(128, rng)}, {}, 0.15, src);
  const auto b = gip_estimate(u, {SignVector::random(128, rng)}, {}, 0.15, src);
  CHECK(a.alice_message == b.alice_message);
}

TEST_CASE("uncertain protocol: single message table short-circuits") {
  // L = 1 means Bob always outputs B_1(y)
  const std::uint32_t domain = 16;
  OneWayCertainTable table;
  table.message_count = 1;
  BitVector b1(domain);
  for (std::uint32_t y = 0; y < domain; ++y) b1.set(y, (y * 7) & 1u);
  table.bob_tables = {b1};
  table.alice_message = [](std::uint64_t) { return 0u; };
  BitVector fx(domain);
  const auto run = isr_uncertain_protocol(
      fx, table, 5, {}, 0.2, samplers::RandomnessSource::isr(0.5, 77));
  CHECK(run.chosen_message == 0);
  CHECK(run.run.output == b1.get(5));
}

TEST_CASE("uncertain protocol: exact tables recover the function") {
  const std::uint32_t k = 2, n = 2;
  const SubsetFamily s({range_subset(1, 1, n), range_subset(1, 2, n)}, n);
  const auto table = build_parity_table(s);
  CHECK(table.message_count == 4);
  Rng rng(11);
  int errors = 0;
  const int trials = 60;
  for (int it = 0; it < trials; ++it) {
    const std::uint64_t x_atom = rng.below(1ull << (k * n));
    const std::uint64_t y_atom = rng.below(1ull << (k * n));
    const auto fx = parity_family_row(s, samplers::unpack_blocks(x_atom, k, n));
    const auto run = isr_uncertain_protocol(
        fx, table, y_atom, {}, 0.3,
        samplers::RandomnessSource::isr(1.0, rng.next_u64()));
    const int truth = functions::maj_subset_parity(
        s, samplers::unpack_blocks(x_atom, k, n),
        samplers::unpack_blocks(y_atom, k, n));
    if (run.run.output != truth) ++errors;
  }
  CHECK(errors <= trials / 10);
}

TEST_CASE("brute force search: witnesses and monotonicity") {
  const std::vector<std::vector<double>> mu = {{0.25, 0.25}, {0.25, 0.25}};
  const auto ident = brute_force_best_protocol({{0, 0}, {1, 1}}, mu, 1);
  CHECK(ident.min_error == doctest::Approx(0.0));
  const auto x0 = brute_force_best_protocol({{0, 1}, {1, 0}}, mu, 0);
  CHECK(x0.min_error == doctest::Approx(0.5));
  const auto x1 = brute_force_best_protocol({{0, 1}, {1, 0}}, mu, 1);
  CHECK(x1.min_error == doctest::Approx(0.0));
  // the c=1 parity witness separates the two inputs
  CHECK(x1.message_of_x[0] != x1.message_of_x[1]);
  CHECK_THROWS_AS(brute_force_best_protocol({{0}}, {{1.0}}, 3),
                  std::invalid_argument);
}
