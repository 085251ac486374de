#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "uncertlab/simulation.hpp"

using namespace uncertlab;
using namespace uncertlab::simulation;

namespace {

IndexSubset range_subset(std::uint32_t from, std::uint32_t to, std::uint32_t n) {
  std::vector<std::uint32_t> v;
  for (std::uint32_t i = from; i <= to; ++i) v.push_back(i);
  return IndexSubset(std::move(v), n);
}

// independent mutual-information oracle over a joint table p(a, b | c) form
double mi_oracle(const std::map<std::tuple<int, int, int>, double>& pabc) {
  std::map<int, double> pc;
  std::map<std::pair<int, int>, double> pac, pbc;
  for (const auto& [key, p] : pabc) {
    const auto [a, b, c] = key;
    pc[c] += p;
    pac[{a, c}] += p;
    pbc[{b, c}] += p;
  }
  double nats = 0.0;
  for (const auto& [key, p] : pabc) {
    if (p <= 0) continue;
    const auto [a, b, c] = key;
    nats += p * std::log(p * pc[c] / (pac[{a, c}] * pbc[{b, c}]));
  }
  return nats / std::log(2.0);
}

}  // namespace

TEST_CASE("simulation protocol: exact evaluator returns the threshold") {
  const std::uint32_t k = 2, n = 4;
  const SubsetFamily t_hat({range_subset(1, 2, n), range_subset(2, 3, n)}, n);
  REQUIRE(samplers::is_typical(t_hat));
  Rng rng(1);
  for (std::uint32_t u = 0; u < 4; ++u)
    for (std::uint32_t v = 0; v < 4; ++v) {
      BitVector ub(k), vb(k);
      for (std::uint32_t i = 0; i < k; ++i) {
        ub.set(i, (u >> i) & 1u);
        vb.set(i, (v >> i) & 1u);
      }
      for (int rep = 0; rep < 5; ++rep) {
        const int out = simulation_protocol(ub, vb, t_hat, 0.25, 0.25,
                                            exact_composed_evaluator(), rng);
        CHECK(out == functions::hd_threshold(k, ub, vb));
        if (u == v) CHECK(out == 0);  // zero distance at k >= 2
      }
    }
}

TEST_CASE("simulation protocol: q = 0 hands Bob's family to Alice") {
  const std::uint32_t n = 6;
  const SubsetFamily t_hat({range_subset(2, 4, n)}, n);
  Rng rng(2);
  BitVector u(1), v(1);
  bool always_equal = true;
  const InnerProtocol capture = [&](const SubsetFamily& s, const BitBlockString&,
                                    const SubsetFamily& t, const BitBlockString&) {
    if (!(s == t)) always_equal = false;
    return 0;
  };
  for (int it = 0; it < 30; ++it)
    simulation_protocol(u, v, t_hat, 0.3, 0.0, capture, rng);
  CHECK(always_equal);
}

TEST_CASE("simulation protocol: untypical families rejected") {
  const std::uint32_t n = 6;
  const SubsetFamily skinny({range_subset(1, 1, n)}, n);
  Rng rng(3);
  CHECK_THROWS_AS(simulation_protocol(BitVector(1), BitVector(1), skinny, 0.25,
                                      0.25, exact_composed_evaluator(), rng),
                  std::invalid_argument);
}

TEST_CASE("total variation distance") {
  DiscreteDistribution p = {{0, 0.5}, {1, 0.5}};
  DiscreteDistribution q = {{2, 0.5}, {3, 0.5}};
  CHECK(tv_distance_exact(p, p) == doctest::Approx(0.0));
  CHECK(tv_distance_exact(p, q) == doctest::Approx(1.0));
  DiscreteDistribution r = {{0, 0.25}, {1, 0.75}};
  CHECK(tv_distance_exact(p, r) == doctest::Approx(0.25));
  CHECK(tv_distance_exact(r, p) == doctest::Approx(0.25));
}

TEST_CASE("pair law equals the common-source construction") {
  for (double eps : {0.1, 0.25, 0.4}) {
    const double tv = tv_distance_exact(
        xy_law(samplers::DistributionSpec::noisy_pairs(1, 5,
                                                       2 * eps - 2 * eps * eps)),
        common_source_law(1, 5, eps));
    CHECK(tv <= 1e-12);
  }
}

TEST_CASE("conditioned law approaches the product law as n grows") {
  std::vector<double> tvs;
  for (std::uint32_t n : {4u, 6u, 8u}) {
    const SubsetFamily t_hat({range_subset(1, n / 2, n)}, n);
    tvs.push_back(tv_distance_exact(
        xy_law(samplers::DistributionSpec::noisy_pairs(
            1, n, 2 * 0.25 - 2 * 0.25 * 0.25)),
        xy_law(samplers::DistributionSpec::conditioned_noisy(t_hat, 0.25))));
  }
  CHECK(tvs[0] > 0.0);
  CHECK(tvs[0] > tvs[1]);
  CHECK(tvs[1] > tvs[2]);
}

TEST_CASE("intermediate information cost: pinned values") {
  const std::uint32_t k = 2, n = 2;
  // eps = 1/2 makes (Y, T) independent of X, so the parity tuple is a
  // uniform k-bit string given the conditioning variables
  const auto dist = samplers::DistributionSpec::kappa_epsilon(k, n, 0.5);
  const MessageFn constant = [](const SubsetFamily&, const BitBlockString&) {
    return 0u;
  };
  CHECK(intermediate_info_cost(constant, 1, dist) == doctest::Approx(0.0));

  const MessageFn full = [](const SubsetFamily& s, const BitBlockString& x) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < s.block_count(); ++i)
      if (f2_inner(s.block(i), x.block(i))) m |= 1u << i;
    return m;
  };
  CHECK(intermediate_info_cost(full, 4, dist) == doctest::Approx(2.0).epsilon(1e-9));

  const MessageFn first = [](const SubsetFamily& s, const BitBlockString& x) {
    return static_cast<std::uint32_t>(f2_inner(s.block(0), x.block(0)));
  };
  CHECK(intermediate_info_cost(first, 2, dist) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("intermediate information cost agrees with an independent oracle") {
  const std::uint32_t k = 2, n = 2;
  const auto dist = samplers::DistributionSpec::kappa_epsilon(k, n, 0.25);
  const MessageFn first = [](const SubsetFamily& s, const BitBlockString& x) {
    return static_cast<std::uint32_t>(f2_inner(s.block(0), x.block(0)));
  };
  // oracle: build the (parities, message, (T,y)) joint directly
  std::map<std::tuple<int, int, int>, double> pabc;
  samplers::for_each_support_atom(
      dist, 1ull << 22, [&](const samplers::Draw& d, double p) {
        int parities = 0;
        for (std::uint32_t i = 0; i < k; ++i)
          if (f2_inner(d.T.block(i), d.x.block(i))) parities |= 1 << i;
        const int m = static_cast<int>(first(d.S, d.x));
        const int c = static_cast<int>(samplers::pack_family(d.T) |
                                       (samplers::pack_blocks(d.y) << (k * n)));
        pabc[{parities, m, c}] += p;
      });
  const double expect = mi_oracle(pabc);
  CHECK(intermediate_info_cost(first, 2, dist) ==
        doctest::Approx(expect).epsilon(1e-9));
  CHECK(expect >= 0.0);
  CHECK(expect <= static_cast<double>(k));
}

TEST_CASE("posterior argmax estimator") {
  // B = W deterministically: success 1
  JointTable t1;
  t1.q_size = 1;
  t1.w_size = 4;
  t1.k = 2;
  for (std::uint32_t w = 0; w < 4; ++w) t1.probs[{0, w, w}] = 0.25;
  CHECK(posterior_argmax_estimator(t1).success_probability ==
        doctest::Approx(1.0));

  // B uniform and independent: success 2^-k
  JointTable t2;
  t2.q_size = 2;
  t2.w_size = 2;
  t2.k = 2;
  for (std::uint32_t q = 0; q < 2; ++q)
    for (std::uint32_t w = 0; w < 2; ++w)
      for (std::uint32_t b = 0; b < 4; ++b) t2.probs[{q, w, b}] = 1.0 / 16;
  const auto est2 = posterior_argmax_estimator(t2);
  CHECK(est2.success_probability == doctest::Approx(0.25));
  for (const auto& [qw, guess] : est2.guess) CHECK(guess == 0);  // lowest tie

  // positive conditional information implies strict improvement over 2^-k
  JointTable t3;
  t3.q_size = 1;
  t3.w_size = 2;
  t3.k = 2;
  // W biases B's low bit towards W
  for (std::uint32_t w = 0; w < 2; ++w)
    for (std::uint32_t b = 0; b < 4; ++b)
      t3.probs[{0, w, b}] = ((b & 1u) == w) ? 0.175 : 0.075;
  const auto est3 = posterior_argmax_estimator(t3);
  CHECK(est3.success_probability > 0.25);
}

TEST_CASE("joint table io round trip with rational rows") {
  JointTable t;
  t.q_size = 1;
  t.w_size = 2;
  t.k = 1;
  t.probs[{0, 0, 0}] = 0.375;
  t.probs[{0, 0, 1}] = 0.125;
  t.probs[{0, 1, 0}] = 0.125;
  t.probs[{0, 1, 1}] = 0.375;
  std::stringstream io;
  save_joint_table(t, io);
  const auto back = load_joint_table(io);
  CHECK(back.k == 1);
  CHECK(back.probs.size() == 4);
  CHECK(back.probs.at({0, 0, 0}) == doctest::Approx(0.375));

  std::stringstream rational(
      "# uncertlab-joint-table v1 q=1 w=1 k=1\n0 0 0 3/8\n0 0 1 5/8\n");
  const auto rat = load_joint_table(rational);
  CHECK(rat.probs.at({0, 0, 0}) == doctest::Approx(0.375));
  CHECK(rat.probs.at({0, 0, 1}) == doctest::Approx(0.625));
}
