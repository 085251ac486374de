#include "uncertlab/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "uncertlab/math.hpp"

namespace uncertlab::simulation {

int simulation_protocol(const BitVector& u, const BitVector& v,
                        const SubsetFamily& t_hat, double eps, double q,
                        const InnerProtocol& inner, Rng& rng) {
  if (!samplers::is_typical(t_hat))
    throw std::invalid_argument("simulation_protocol: T_hat must be typical");
  auto cond = samplers::sample_conditioned(t_hat, eps, u, v, rng);

  // Alice's subset family: a q-noisy copy of T_hat.
  std::vector<IndexSubset> s_blocks;
  s_blocks.reserve(t_hat.block_count());
  for (std::size_t i = 0; i < t_hat.block_count(); ++i) {
    BitVector mask = t_hat.block(i).mask();
    if (q > 0.0)
      for (std::size_t j = 0; j < mask.size(); ++j)
        if (rng.bernoulli(q)) mask.flip(j);
    s_blocks.push_back(IndexSubset::from_mask(mask));
  }
  const SubsetFamily s(std::move(s_blocks), t_hat.block_size());
  return inner(s, cond.x, t_hat, cond.y);
}

InnerProtocol exact_composed_evaluator() {
  return [](const SubsetFamily&, const BitBlockString& x, const SubsetFamily& t,
            const BitBlockString& y) {
    return functions::composed_parity_hd(t, x, y);
  };
}

double tv_distance_exact(const DiscreteDistribution& p,
                         const DiscreteDistribution& q) {
  double l1 = 0.0;
  auto it = p.begin();
  auto jt = q.begin();
  while (it != p.end() || jt != q.end()) {
    if (jt == q.end() || (it != p.end() && it->first < jt->first)) {
      l1 += std::abs(it->second);
      ++it;
    } else if (it == p.end() || jt->first < it->first) {
      l1 += std::abs(jt->second);
      ++jt;
    } else {
      l1 += std::abs(it->second - jt->second);
      ++it;
      ++jt;
    }
  }
  return 0.5 * l1;
}

DiscreteDistribution xy_law(const samplers::DistributionSpec& spec,
                            std::uint64_t budget) {
  const std::uint64_t kn = static_cast<std::uint64_t>(spec.k) * spec.n;
  if (kn > 31) throw std::length_error("xy_law: k*n too large to key");
  DiscreteDistribution law;
  samplers::for_each_support_atom(
      spec, budget, [&](const samplers::Draw& d, double p) {
        const std::uint64_t key =
            samplers::pack_blocks(d.x) | (samplers::pack_blocks(d.y) << kn);
        law[key] += p;
      });
  return law;
}

DiscreteDistribution common_source_law(std::uint32_t k, std::uint32_t n,
                                       double eps, std::uint64_t budget) {
  const std::uint64_t kn = static_cast<std::uint64_t>(k) * n;
  if (kn > 16 || (1ull << (2 * kn)) > budget)
    throw std::length_error("common_source_law: budget exceeded");
  // coordinates are independent; marginalize the shared bit per coordinate
  double q[2][2];
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double p = 0.0;
      for (int z = 0; z < 2; ++z)
        p += 0.5 * (x == z ? 1.0 - eps : eps) * (y == z ? 1.0 - eps : eps);
      q[x][y] = p;
    }
  const std::uint64_t states = 1ull << kn;
  DiscreteDistribution law;
  for (std::uint64_t x = 0; x < states; ++x)
    for (std::uint64_t y = 0; y < states; ++y) {
      double p = 1.0;
      for (std::uint64_t j = 0; j < kn; ++j)
        p *= q[(x >> j) & 1][(y >> j) & 1];
      law[x | (y << kn)] = p;
    }
  return law;
}

void JointTable::check() const {
  double total = 0.0;
  for (const auto& [key, p] : probs) {
    if (p < 0.0) throw std::invalid_argument("joint table: negative mass");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("joint table: probabilities must sum to 1");
}

void save_joint_table(const JointTable& t, std::ostream& out) {
  out << "# uncertlab-joint-table v1 q=" << t.q_size << " w=" << t.w_size
      << " k=" << t.k << "\n";
  out.precision(17);
  for (const auto& [key, p] : t.probs) {
    const auto [q, w, b] = key;
    out << q << " " << w << " " << b << " " << p << "\n";
  }
}

JointTable load_joint_table(std::istream& in) {
  JointTable t;
  std::string line;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# uncertlab-joint-table v1 q=%u w=%u k=%u",
                  &t.q_size, &t.w_size, &t.k) != 3)
    throw std::runtime_error("joint table: bad header");
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::uint32_t q, w, b;
    std::string prob;
    if (!(ss >> q >> w >> b >> prob))
      throw std::runtime_error("joint table: bad row");
    double p;
    const auto slash = prob.find('/');
    if (slash != std::string::npos) {
      // exact rational notation, e.g. 3/8
      p = std::stod(prob.substr(0, slash)) / std::stod(prob.substr(slash + 1));
    } else {
      p = std::stod(prob);
    }
    t.probs[{q, w, b}] += p;
  }
  t.check();
  return t;
}

double intermediate_info_cost(const MessageFn& message,
                              std::uint32_t message_count,
                              const samplers::DistributionSpec& dist,
                              std::uint64_t budget) {
  if (!dist.has_subsets() || !dist.has_strings())
    throw std::invalid_argument(
        "intermediate_info_cost: distribution must carry (S,x,T,y)");
  const std::uint32_t k = dist.k;
  const std::uint64_t kn = static_cast<std::uint64_t>(k) * dist.n;
  if (kn > 16) throw std::length_error("intermediate_info_cost: instance too big");

  // Joint law of (A = parity tuple, B = message, C = (T, y)).
  std::map<std::uint64_t, double> pabc, pac, pbc, pc;
  samplers::for_each_support_atom(
      dist, budget, [&](const samplers::Draw& d, double p) {
        if (p == 0.0) return;
        std::uint32_t parities = 0;
        for (std::uint32_t i = 0; i < k; ++i)
          if (f2_inner(d.T.block(i), d.x.block(i))) parities |= 1u << i;
        const std::uint32_t m = message(d.S, d.x);
        if (m >= message_count)
          throw std::invalid_argument("message index out of range");
        const std::uint64_t c =
            samplers::pack_family(d.T) | (samplers::pack_blocks(d.y) << kn);
        const std::uint64_t key_c = c;
        const std::uint64_t key_ac = (c << k) | parities;
        const std::uint64_t key_bc = c * message_count + m;
        const std::uint64_t key_abc = (c * message_count + m) << k | parities;
        pabc[key_abc] += p;
        pac[key_ac] += p;
        pbc[key_bc] += p;
        pc[key_c] += p;
      });

  // I(A;B|C) = sum p(a,b,c) log( p(a,b,c) p(c) / (p(a,c) p(b,c)) )
  double info_nats = 0.0;
  for (const auto& [key, p] : pabc) {
    if (p <= 0.0) continue;
    const std::uint32_t parities = static_cast<std::uint32_t>(key & ((1u << k) - 1));
    const std::uint64_t cm = key >> k;
    const std::uint64_t c = cm / message_count;
    const double pj = p;
    const double pc_v = pc.at(c);
    const double pac_v = pac.at((c << k) | parities);
    const double pbc_v = pbc.at(cm);
    info_nats += pj * std::log(pj * pc_v / (pac_v * pbc_v));
  }
  return std::max(0.0, info_nats / std::log(2.0));
}

ArgmaxEstimator posterior_argmax_estimator(const JointTable& table) {
  table.check();
  ArgmaxEstimator est;
  // Posterior argmax per (q,w) equals joint-mass argmax; keys iterate in
  // ascending b, so strict improvement keeps the smallest tied b.
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> best_mass;
  for (const auto& [key, p] : table.probs) {
    const auto [q, w, b] = key;
    const std::pair<std::uint32_t, std::uint32_t> qw{q, w};
    auto it = best_mass.find(qw);
    if (it == best_mass.end() || p > it->second + 1e-15) {
      best_mass[qw] = p;
      est.guess[qw] = b;
    }
  }
  for (const auto& [qw, mass] : best_mass) est.success_probability += mass;
  return est;
}

}  // namespace uncertlab::simulation
