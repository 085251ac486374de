#include "uncertlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "uncertlab/berry_esseen.hpp"
#include "uncertlab/bruteforce.hpp"
#include "uncertlab/calibration.hpp"
#include "uncertlab/distance.hpp"
#include "uncertlab/gip.hpp"
#include "uncertlab/parallel.hpp"
#include "uncertlab/shift_graph.hpp"
#include "uncertlab/shift_reduction.hpp"
#include "uncertlab/simulation.hpp"
#include "uncertlab/stability.hpp"
#include "uncertlab/stretch.hpp"
#include "uncertlab/suites.hpp"
#include "uncertlab/uncertain.hpp"

namespace uncertlab::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

json parse_object(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(std::string(what) + ": invalid JSON");
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected an object");
  return j;
}

// Fail-closed parameter access: every key must be known, reads are typed.
class Params {
 public:
  Params(const json& obj, std::set<std::string> allowed)
      : obj_(obj), allowed_(std::move(allowed)) {
    for (const auto& [key, _] : obj.items())
      if (!allowed_.count(key))
        throw ConfigError("unknown parameter key: " + key);
  }

  double number(const std::string& key, double dflt) const {
    if (!obj_.contains(key)) return dflt;
    if (!obj_[key].is_number()) throw ConfigError("parameter not a number: " + key);
    return obj_[key].get<double>();
  }
  std::uint64_t integer(const std::string& key, std::uint64_t dflt) const {
    if (!obj_.contains(key)) return dflt;
    if (!obj_[key].is_number_integer() && !obj_[key].is_number_unsigned())
      throw ConfigError("parameter not an integer: " + key);
    return obj_[key].get<std::uint64_t>();
  }
  std::string text(const std::string& key, const std::string& dflt) const {
    if (!obj_.contains(key)) return dflt;
    if (!obj_[key].is_string()) throw ConfigError("parameter not a string: " + key);
    return obj_[key].get<std::string>();
  }
  std::vector<std::uint32_t> int_list(const std::string& key,
                                      std::vector<std::uint32_t> dflt) const {
    if (!obj_.contains(key)) return dflt;
    if (!obj_[key].is_array()) throw ConfigError("parameter not a list: " + key);
    std::vector<std::uint32_t> out;
    for (const auto& v : obj_[key]) out.push_back(v.get<std::uint32_t>());
    return out;
  }

 private:
  const json& obj_;
  std::set<std::string> allowed_;
};

std::uint64_t pick_trials(const RunOptions& opt, std::uint64_t dflt) {
  std::uint64_t t = opt.trials ? opt.trials : dflt;
  if (opt.fast) t = std::max<std::uint64_t>(1, t / 10);
  return t;
}

IndexSubset range_subset(std::uint32_t from, std::uint32_t to, std::uint32_t n) {
  std::vector<std::uint32_t> v;
  for (std::uint32_t i = from; i <= to; ++i) v.push_back(i);
  return IndexSubset(std::move(v), n);
}

// ---- experiment implementations ----

ExperimentReport exp_distance(const Params& p, const RunOptions& opt) {
  const std::string family = p.text("family", "subset-majority");
  const std::string mode = p.text("mode", "mc");
  ExperimentReport rep;
  rep.experiment_id = "distance";
  rep.param("family", family);
  rep.param("mode", mode);

  std::unique_ptr<functions::FunctionSpec> f, g;
  samplers::DistributionSpec dist = samplers::DistributionSpec::uniform_pairs(1);
  if (family == "subset-majority") {
    const auto ell = static_cast<std::uint32_t>(p.integer("ell", 1000));
    const auto gap = static_cast<std::uint32_t>(p.integer("gap", 40));
    const auto n = static_cast<std::uint32_t>(p.integer("n", ell));
    if (gap > ell || ell > n) throw ConfigError("distance: need gap <= ell <= n");
    f = std::make_unique<functions::FunctionSpec>(
        functions::FunctionSpec::subset_majority(range_subset(1, ell - gap, n)));
    g = std::make_unique<functions::FunctionSpec>(
        functions::FunctionSpec::subset_majority(range_subset(1, ell, n)));
    dist = samplers::DistributionSpec::uniform_pairs(n);
    rep.param("ell", std::to_string(ell));
    rep.param("gap", std::to_string(gap));
    rep.param("n", std::to_string(n));
  } else if (family == "xor-parity") {
    const auto n = static_cast<std::uint32_t>(p.integer("n", 6));
    const auto gap = static_cast<std::uint32_t>(p.integer("gap", 1));
    const double eta = p.number("eta", 0.25);
    if (gap + 1 > n) throw ConfigError("distance: xor gap too large");
    f = std::make_unique<functions::FunctionSpec>(
        functions::FunctionSpec::xor_parity(range_subset(1, 1 + gap, n)));
    g = std::make_unique<functions::FunctionSpec>(
        functions::FunctionSpec::xor_parity(range_subset(1, 1, n)));
    dist = samplers::DistributionSpec::noisy_pairs(1, n, eta);
    rep.param("n", std::to_string(n));
    rep.param("gap", std::to_string(gap));
    rep.param("eta", fmt(eta));
  } else if (family == "maj-subset-parity") {
    const auto k = static_cast<std::uint32_t>(p.integer("k", 99));
    const auto n = static_cast<std::uint32_t>(p.integer("n", 24));
    const double delta_prime = p.number("delta_prime", 0.02);
    // per-block correlation rho = 1-2delta' realized by |S^(i) xor T^(i)| = 1
    // and eps chosen with (1-2eps)^2 = rho
    const double rho = 1.0 - 2.0 * delta_prime;
    const double eps = (1.0 - std::sqrt(rho)) / 2.0;
    Rng rng = Rng::substream(opt.seed, {tag_hash("distance-family")});
    std::vector<IndexSubset> sb, tb;
    for (std::uint32_t i = 0; i < k; ++i) {
      BitVector mask(n);
      std::uint32_t sz = 0;
      for (std::uint32_t j = 0; j < n; ++j) {
        const bool in = rng.next_bit();
        mask.set(j, in);
        sz += in;
      }
      if (sz == 0 || sz == n) {  // keep both S and T nonempty after the toggle
        mask.set(0, true);
        mask.set(1, false);
      }
      sb.push_back(IndexSubset::from_mask(mask));
      std::uint32_t off = 0;
      while (mask.get(off)) ++off;  // toggle a coordinate outside S
      mask.flip(off);
      tb.push_back(IndexSubset::from_mask(mask));
    }
    f = std::make_unique<functions::FunctionSpec>(
        functions::FunctionSpec::maj_of_subset_parity(SubsetFamily(sb, n)));
    g = std::make_unique<functions::FunctionSpec>(
        functions::FunctionSpec::maj_of_subset_parity(SubsetFamily(tb, n)));
    dist = samplers::DistributionSpec::noisy_pairs(k, n, 2 * eps - 2 * eps * eps);
    rep.param("k", std::to_string(k));
    rep.param("n", std::to_string(n));
    rep.param("delta_prime", fmt(delta_prime));
    rep.param("rho", fmt(rho));
  } else {
    throw ConfigError("distance: unknown family " + family);
  }

  rep.master_seed = opt.seed;
  if (mode == "exact") {
    const double v = functions::distance_exact(*f, *g, dist);
    rep.trials = 0;
    Estimate e;
    e.name = "distance";
    e.value = v;
    e.ci95_lo = e.ci95_hi = v;
    rep.estimates.push_back(e);
  } else if (mode == "mc") {
    const std::uint64_t trials = pick_trials(opt, 1000000);
    auto mc = functions::distance_monte_carlo(*f, *g, dist, trials, opt.seed,
                                              opt.workers);
    rep.trials = trials;
    rep.estimates = mc.estimates;
    rep.wall_ms = mc.wall_ms;
  } else {
    throw ConfigError("distance: unknown mode " + mode);
  }
  return rep;
}

ExperimentReport exp_stability(const Params& p, const RunOptions& opt) {
  const auto k = static_cast<std::uint32_t>(p.integer("k", 3));
  const double rho = p.number("rho", 0.5);
  const std::uint64_t trials = pick_trials(opt, 1000000);
  ExperimentReport rep;
  rep.experiment_id = "stability";
  rep.param("k", std::to_string(k));
  rep.param("rho", fmt(rho));
  rep.trials = trials;
  rep.master_seed = opt.seed;
  const double stab =
      verifiers::noise_stability_mc(k, rho, trials, opt.seed, opt.workers);
  Estimate e;
  e.name = "stability";
  e.value = stab;
  // stability is 2p-1 for an agreement probability p
  const double pa = (stab + 1.0) / 2.0;
  e.stderr_ = 2.0 * std::sqrt(std::max(0.0, pa * (1.0 - pa)) /
                              static_cast<double>(trials));
  e.ci95_lo = e.value - 1.96 * e.stderr_;
  e.ci95_hi = e.value + 1.96 * e.stderr_;
  rep.estimates.push_back(e);
  rep.estimates.push_back(
      {"lower_bound", majority_stability_bound(rho), 0.0,
       majority_stability_bound(rho), majority_stability_bound(rho)});
  return rep;
}

ExperimentReport exp_gip(const Params& p, const RunOptions& opt) {
  const auto d = static_cast<std::uint32_t>(p.integer("d", 512));
  const double rho = p.number("rho", 0.5);
  const double theta = p.number("theta", 0.1);
  const auto tcount = static_cast<std::uint32_t>(p.integer("targets", 1));
  const std::uint64_t runs = pick_trials(opt, 1000);

  ExperimentReport rep;
  rep.experiment_id = "gip";
  rep.param("d", std::to_string(d));
  rep.param("rho", fmt(rho));
  rep.param("theta", fmt(theta));
  rep.param("targets", std::to_string(tcount));
  rep.trials = runs;
  rep.master_seed = opt.seed;

  const std::uint64_t bits = protocols::gip_repetitions(theta, rho, tcount);
  const std::uint64_t failures = mc_count(
      runs, opt.workers, opt.seed, tag_hash("gip-runs"),
      [&](std::uint64_t run, Rng& rng) {
        const SignVector u = SignVector::random(d, rng);
        std::vector<SignVector> targets;
        std::vector<double> truth;
        for (std::uint32_t j = 0; j < tcount; ++j) {
          targets.push_back(SignVector::random(d, rng));
          std::int64_t dot = 0;
          for (std::uint32_t i = 0; i < d; ++i) dot += u[i] * targets[j][i];
          truth.push_back(static_cast<double>(dot) / d);
        }
        const auto source = samplers::RandomnessSource::isr(
            rho, Rng::derive_key(opt.seed, {tag_hash("gip-isr"), run}));
        const auto est = protocols::gip_estimate(u, targets, {}, theta, source);
        for (std::uint32_t j = 0; j < tcount; ++j)
          if (std::abs(est.estimates[j] - truth[j]) > theta) return true;
        return false;
      });
  rep.estimates.push_back(bernoulli_estimate("failure_rate", failures, runs));
  rep.estimates.push_back({"message_bits", static_cast<double>(bits), 0.0,
                           static_cast<double>(bits), static_cast<double>(bits)});
  return rep;
}

ExperimentReport exp_isr_protocol(const Params& p, const RunOptions& opt) {
  const auto k = static_cast<std::uint32_t>(p.integer("k", 2));
  const auto n = static_cast<std::uint32_t>(p.integer("n", 4));
  const double rho = p.number("rho", 0.5);
  const double theta = p.number("theta", 0.1);
  const std::uint64_t trials = pick_trials(opt, 10000);
  const std::uint64_t kn = static_cast<std::uint64_t>(k) * n;
  if (kn > 16) throw ConfigError("isr-protocol: k*n too large for the toy class");

  ExperimentReport rep;
  rep.experiment_id = "isr-protocol";
  rep.param("k", std::to_string(k));
  rep.param("n", std::to_string(n));
  rep.param("rho", fmt(rho));
  rep.param("theta", fmt(theta));
  rep.trials = trials;
  rep.master_seed = opt.seed;

  // fixed family: block i = {(i*n)+1 .. (i*n)+ceil(n/2)} within the block
  std::vector<IndexSubset> blocks;
  for (std::uint32_t i = 0; i < k; ++i)
    blocks.push_back(range_subset(1, (n + 1) / 2, n));
  const SubsetFamily s(blocks, n);
  const auto table = protocols::build_parity_table(s);
  // f(x,.) depends on x only through its parity class; memoize the rows
  std::vector<BitVector> rows(1u << k);
  for (std::uint32_t cls = 0; cls < (1u << k); ++cls) {
    // representative x with the given parities: flip the first element of
    // each block whose parity bit is set
    BitBlockString x(k, n);
    for (std::uint32_t i = 0; i < k; ++i)
      if ((cls >> i) & 1u) x.block_mut(i).set(0, true);
    rows[cls] = protocols::parity_family_row(s, x);
  }

  std::uint64_t bits = protocols::gip_repetitions(theta / 3.0, rho, table.message_count);
  const std::uint64_t errors = mc_count(
      trials, opt.workers, opt.seed, tag_hash("isr-protocol"),
      [&](std::uint64_t trial, Rng& rng) {
        const std::uint64_t x_atom = rng.next_u64() & ((1ull << kn) - 1);
        const std::uint64_t y_atom = rng.next_u64() & ((1ull << kn) - 1);
        const BitBlockString x = samplers::unpack_blocks(x_atom, k, n);
        const BitBlockString y = samplers::unpack_blocks(y_atom, k, n);
        std::uint32_t cls = 0;
        const BitVector px = functions::block_parities(s, x);
        for (std::uint32_t i = 0; i < k; ++i)
          if (px.get(i)) cls |= 1u << i;
        const auto source = samplers::RandomnessSource::isr(
            rho, Rng::derive_key(opt.seed, {tag_hash("isr-toy"), trial}));
        const auto run = protocols::isr_uncertain_protocol(
            rows[cls], table, y_atom, {}, theta, source);
        const int truth = functions::maj_subset_parity(s, x, y);
        return run.run.output != truth;
      });
  rep.estimates.push_back(bernoulli_estimate("error_rate", errors, trials));
  rep.estimates.push_back({"message_bits", static_cast<double>(bits), 0.0,
                           static_cast<double>(bits), static_cast<double>(bits)});
  return rep;
}

ExperimentReport exp_set_recovery(const Params& p, const RunOptions& opt) {
  const auto ell = static_cast<std::uint32_t>(p.integer("ell", 16));
  const auto n = static_cast<std::uint32_t>(p.integer("n", 4096));
  const double failure_prob = p.number("failure_prob", 0.01);
  const std::uint64_t trials = pick_trials(opt, 10000);
  if (ell > n) throw ConfigError("set-recovery: ell <= n");

  ExperimentReport rep;
  rep.experiment_id = "set-recovery";
  rep.param("ell", std::to_string(ell));
  rep.param("n", std::to_string(n));
  rep.param("failure_prob", fmt(failure_prob));
  rep.trials = trials;
  rep.master_seed = opt.seed;

  const std::uint64_t failures = mc_count(
      trials, opt.workers, opt.seed, tag_hash("set-recovery"),
      [&](std::uint64_t trial, Rng& rng) {
        // random T of size ell, random S inside it
        std::vector<std::uint32_t> t_elems;
        std::set<std::uint32_t> seen;
        while (t_elems.size() < ell) {
          const auto e = static_cast<std::uint32_t>(rng.below(n) + 1);
          if (seen.insert(e).second) t_elems.push_back(e);
        }
        std::sort(t_elems.begin(), t_elems.end());
        std::vector<std::uint32_t> s_elems;
        for (auto e : t_elems)
          if (rng.next_bit()) s_elems.push_back(e);
        const IndexSubset t(t_elems, n), s(s_elems, n);
        const auto pub = samplers::RandomnessSource::pub(
            Rng::derive_key(opt.seed, {tag_hash("set-recovery-pub"), trial}));
        const auto res = protocols::hash_set_recovery(s, t, failure_prob, pub);
        return res.ambiguous || !(res.recovered == s);
      });
  rep.estimates.push_back(bernoulli_estimate("failure_rate", failures, trials));
  return rep;
}

ExperimentReport exp_shift_game(const Params& p, const RunOptions& opt) {
  const double epsilon = p.number("epsilon", 0.25);
  const auto delta_num = p.integer("delta_num", 1);
  const auto delta_den = p.integer("delta_den", 100);
  const auto ell = p.integer("ell", 400);
  const double eta = p.number("eta", 0.1);
  const auto d = static_cast<std::uint32_t>(p.integer("d", 40));
  const std::string blackbox = p.text("blackbox", "oracle");
  const std::uint64_t games = pick_trials(opt, 200);

  const auto params = reductions::ShiftReductionParams::from_protocol(
      epsilon, delta_num, delta_den, ell, eta);
  if (d < params.t) throw ConfigError("shift-game: d >= t required");

  ExperimentReport rep;
  rep.experiment_id = "shift-game";
  rep.param("epsilon", fmt(epsilon));
  rep.param("delta_prime", fmt(static_cast<double>(delta_num) / delta_den));
  rep.param("ell", std::to_string(ell));
  rep.param("eta", fmt(eta));
  rep.param("d", std::to_string(d));
  rep.param("blackbox", blackbox);
  rep.trials = games;
  rep.master_seed = opt.seed;

  reductions::BlackBoxProtocol box;
  if (blackbox == "oracle") {
    box.evaluate = [](const IndexSubset&, const SignVector& x,
                      const IndexSubset& t, const SignVector& y, Rng&) {
      return functions::subset_majority(t, x, y);
    };
    box.cost_bits = params.ell;
  } else if (blackbox == "coin") {
    box.evaluate = [](const IndexSubset&, const SignVector&, const IndexSubset&,
                      const SignVector&, Rng& rng) { return rng.next_bit(); };
    box.cost_bits = 1;
  } else {
    throw ConfigError("shift-game: unknown blackbox " + blackbox);
  }

  auto play_side = [&](reductions::ShiftGameInstance::Side side,
                       std::uint64_t tag) {
    return mc_count(games, opt.workers, opt.seed, tag,
                    [&](std::uint64_t, Rng& rng) {
                      // random sorted t-tuple over [d]
                      std::vector<std::uint32_t> vals;
                      std::set<std::uint32_t> seen;
                      while (vals.size() < params.t) {
                        const auto v = static_cast<std::uint32_t>(rng.below(d) + 1);
                        if (seen.insert(v).second) vals.push_back(v);
                      }
                      std::sort(vals.begin(), vals.end());
                      reductions::ShiftGameInstance inst{SortedTuple(vals, d), side};
                      return reductions::shift_game_reduction(inst, params, box, rng)
                          .yes;
                    });
  };
  const std::uint64_t yes_prefix =
      play_side(reductions::ShiftGameInstance::Side::Prefix, tag_hash("sg-prefix"));
  const std::uint64_t yes_suffix =
      play_side(reductions::ShiftGameInstance::Side::Suffix, tag_hash("sg-suffix"));
  rep.estimates.push_back(bernoulli_estimate("yes_rate_prefix", yes_prefix, games));
  rep.estimates.push_back(bernoulli_estimate("yes_rate_suffix", yes_suffix, games));
  rep.estimates.push_back(
      {"bits_per_game",
       static_cast<double>(params.k * (box.cost_bits + params.s)), 0.0, 0.0, 0.0});
  return rep;
}

ExperimentReport exp_chromatic(const Params& p, const RunOptions& opt) {
  const auto m = static_cast<std::uint32_t>(p.integer("m", 6));
  const auto t = static_cast<std::uint32_t>(p.integer("t", 3));
  const std::string export_path = p.text("export", "");

  const auto g = reductions::shift_graph(m, t);
  const auto chi = reductions::chromatic_number_exact(g);
  ExperimentReport rep;
  rep.experiment_id = "chromatic";
  rep.param("m", std::to_string(m));
  rep.param("t", std::to_string(t));
  rep.param("vertices", std::to_string(g.vertex_count()));
  rep.trials = 0;
  rep.master_seed = opt.seed;
  rep.estimates.push_back({"chromatic_number", static_cast<double>(chi), 0.0,
                           static_cast<double>(chi), static_cast<double>(chi)});
  const double bound = t >= 2 ? iterated_log(t - 1, m) : static_cast<double>(m);
  rep.estimates.push_back({"iterated_log_bound", bound, 0.0, bound, bound});
  if (!export_path.empty()) {
    std::ofstream out(export_path);
    if (!out) throw std::runtime_error("chromatic: cannot write " + export_path);
    reductions::export_adjacency(g, out);
  }
  return rep;
}

ExperimentReport exp_closeness(const Params& p, const RunOptions& opt) {
  const double eps = p.number("eps", 0.25);
  const auto n_list = p.int_list("n_list", {4, 6, 8, 10});
  ExperimentReport rep;
  rep.experiment_id = "closeness";
  rep.param("eps", fmt(eps));
  rep.trials = 0;
  rep.master_seed = opt.seed;

  for (auto n : n_list) {
    const SubsetFamily t_hat({range_subset(1, n / 2, n)}, n);
    const auto cond = samplers::DistributionSpec::conditioned_noisy(t_hat, eps);
    const double tv = simulation::tv_distance_exact(
        simulation::xy_law(samplers::DistributionSpec::noisy_pairs(
            1, n, 2 * eps - 2 * eps * eps)),
        simulation::xy_law(cond));
    rep.estimates.push_back({"tv_n" + std::to_string(n), tv, 0.0, tv, tv});
  }
  return rep;
}

ExperimentReport exp_info_cost(const Params& p, const RunOptions& opt) {
  const auto k = static_cast<std::uint32_t>(p.integer("k", 2));
  const auto n = static_cast<std::uint32_t>(p.integer("n", 2));
  const double eps = p.number("eps", 0.5);
  const std::string message = p.text("message", "full-parity");

  simulation::MessageFn fn;
  std::uint32_t message_count = 1;
  if (message == "constant") {
    fn = [](const SubsetFamily&, const BitBlockString&) { return 0u; };
  } else if (message == "first-parity") {
    message_count = 2;
    fn = [](const SubsetFamily& s, const BitBlockString& x) {
      return static_cast<std::uint32_t>(f2_inner(s.block(0), x.block(0)));
    };
  } else if (message == "full-parity") {
    message_count = 1u << k;
    fn = [](const SubsetFamily& s, const BitBlockString& x) {
      std::uint32_t m = 0;
      for (std::size_t i = 0; i < s.block_count(); ++i)
        if (f2_inner(s.block(i), x.block(i))) m |= 1u << i;
      return m;
    };
  } else {
    throw ConfigError("info-cost: unknown message " + message);
  }

  // messages here are functions of (T, x); the conditional mutual information
  // is taken against the parities under T, matching the cost definition
  const auto dist = samplers::DistributionSpec::kappa_epsilon(k, n, eps);
  simulation::MessageFn message_of_t = fn;
  const double bits =
      simulation::intermediate_info_cost(message_of_t, message_count, dist);

  ExperimentReport rep;
  rep.experiment_id = "info-cost";
  rep.param("k", std::to_string(k));
  rep.param("n", std::to_string(n));
  rep.param("eps", fmt(eps));
  rep.param("message", message);
  rep.trials = 0;
  rep.master_seed = opt.seed;
  rep.estimates.push_back({"info_bits", bits, 0.0, bits, bits});
  return rep;
}

ExperimentReport exp_berry_esseen(const Params& p, const RunOptions& opt) {
  const double delta_prime = p.number("delta_prime", 0.04);
  const auto ells = p.int_list("ell_list", {64, 256, 1024});
  const std::uint64_t trials = pick_trials(opt, 1000000);

  ExperimentReport rep;
  rep.experiment_id = "berry-esseen";
  rep.param("delta_prime", fmt(delta_prime));
  rep.trials = trials;
  rep.master_seed = opt.seed;
  for (auto ell : ells) {
    const auto r = verifiers::berry_esseen_check(delta_prime, ell, trials,
                                                 opt.seed, opt.workers);
    rep.estimates.push_back({"max_dev_ell" + std::to_string(ell),
                             r.max_abs_deviation, 0.0, r.max_abs_deviation,
                             r.max_abs_deviation});
  }
  return rep;
}

ExperimentReport exp_bruteforce(const Params& p, const RunOptions& opt) {
  const std::string which = p.text("case", "xor-c1");
  std::vector<std::vector<int>> f;
  std::vector<std::vector<double>> mu;
  std::uint32_t c = 0;
  if (which == "identity-c1") {
    f = {{0, 0}, {1, 1}};  // f((x),(y)) = x on uniform bits
    mu = {{0.25, 0.25}, {0.25, 0.25}};
    c = 1;
  } else if (which == "xor-c0" || which == "xor-c1") {
    f = {{0, 1}, {1, 0}};
    mu = {{0.25, 0.25}, {0.25, 0.25}};
    c = which == "xor-c1" ? 1 : 0;
  } else {
    throw ConfigError("bruteforce: unknown case " + which);
  }
  const auto res = protocols::brute_force_best_protocol(f, mu, c);
  ExperimentReport rep;
  rep.experiment_id = "bruteforce";
  rep.param("case", which);
  rep.param("budget_bits", std::to_string(c));
  rep.trials = 0;
  rep.master_seed = opt.seed;
  rep.estimates.push_back(
      {"min_error", res.min_error, 0.0, res.min_error, res.min_error});
  return rep;
}

ExperimentReport exp_stretch_figure1(const Params&, const RunOptions& opt) {
  const SortedTuple sigma({2, 4, 5, 7, 9}, 9);
  const reductions::StretchParams sp{2, 3};
  ExperimentReport rep;
  rep.experiment_id = "stretch-figure1";
  rep.trials = 0;
  rep.master_seed = opt.seed;
  auto tuple_text = [](const SortedTuple& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i)
      s += (i ? "," : "") + std::to_string(t[i]);
    return s;
  };
  rep.param("sigma_stretched", tuple_text(reductions::stretch(sigma, sp).tuple));
  rep.param("prefix_stretched",
            tuple_text(reductions::stretch(sigma.prefix(), sp).tuple));
  rep.param("suffix_stretched",
            tuple_text(reductions::stretch(sigma.suffix(), sp).tuple));
  Estimate e;
  e.name = "tuples_emitted";
  e.value = 3;
  e.ci95_lo = e.ci95_hi = 3;
  rep.estimates.push_back(e);
  return rep;
}

}  // namespace

std::vector<std::string> experiment_kinds() {
  return {"distance",     "stability",  "gip",         "isr-protocol",
          "set-recovery", "shift-game", "chromatic",   "closeness",
          "info-cost",    "berry-esseen", "bruteforce", "stretch-figure1"};
}

ExperimentReport run_experiment(const std::string& kind,
                                const std::string& params_json,
                                const RunOptions& options) {
  const json obj = parse_object(params_json.empty() ? "{}" : params_json,
                                "params");
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  if (kind == "distance")
    rep = exp_distance(Params(obj, {"family", "mode", "n", "ell", "gap", "eta",
                                    "k", "delta_prime"}),
                       options);
  else if (kind == "stability")
    rep = exp_stability(Params(obj, {"k", "rho"}), options);
  else if (kind == "gip")
    rep = exp_gip(Params(obj, {"d", "rho", "theta", "targets"}), options);
  else if (kind == "isr-protocol")
    rep = exp_isr_protocol(Params(obj, {"k", "n", "rho", "theta"}), options);
  else if (kind == "set-recovery")
    rep = exp_set_recovery(Params(obj, {"ell", "n", "failure_prob"}), options);
  else if (kind == "shift-game")
    rep = exp_shift_game(Params(obj, {"epsilon", "delta_num", "delta_den",
                                      "ell", "eta", "d", "blackbox"}),
                         options);
  else if (kind == "chromatic")
    rep = exp_chromatic(Params(obj, {"m", "t", "export"}), options);
  else if (kind == "closeness")
    rep = exp_closeness(Params(obj, {"eps", "n_list"}), options);
  else if (kind == "info-cost")
    rep = exp_info_cost(Params(obj, {"k", "n", "eps", "message"}), options);
  else if (kind == "berry-esseen")
    rep = exp_berry_esseen(Params(obj, {"delta_prime", "ell_list"}), options);
  else if (kind == "bruteforce")
    rep = exp_bruteforce(Params(obj, {"case"}), options);
  else if (kind == "stretch-figure1")
    rep = exp_stretch_figure1(Params(obj, {}), options);
  else
    throw ConfigError("unknown experiment: " + kind);

  if (rep.wall_ms == 0.0)
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  rep.experiment_id = kind;
  if (!options.out_dir.empty()) write_report_files(rep, options.out_dir);
  return rep;
}

ExperimentReport run_from_document(const std::string& document_json,
                                   const RunOptions& overrides,
                                   const std::vector<std::string>& set_keys) {
  const json doc = parse_object(document_json, "config");
  for (const auto& [key, _] : doc.items()) {
    static const std::set<std::string> allowed = {
        "experiment", "params", "trials", "seed", "workers", "fast", "out"};
    if (!allowed.count(key)) throw ConfigError("unknown config key: " + key);
  }
  if (!doc.contains("experiment") || !doc["experiment"].is_string())
    throw ConfigError("config: missing experiment name");

  auto overridden = [&](const std::string& k) {
    return std::find(set_keys.begin(), set_keys.end(), k) != set_keys.end();
  };
  RunOptions opt = overrides;
  if (doc.contains("seed") && !overridden("seed"))
    opt.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("trials") && !overridden("trials"))
    opt.trials = doc["trials"].get<std::uint64_t>();
  if (doc.contains("workers") && !overridden("workers"))
    opt.workers = doc["workers"].get<unsigned>();
  if (doc.contains("fast") && !overridden("fast"))
    opt.fast = doc["fast"].get<bool>();
  if (doc.contains("out") && !overridden("out"))
    opt.out_dir = doc["out"].get<std::string>();

  const std::string params =
      doc.contains("params") ? doc["params"].dump() : "{}";
  return run_experiment(doc["experiment"].get<std::string>(), params, opt);
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "experiment_id,metric";
  for (const auto& [k, _] : report.params) out << "," << k;
  out << ",trials,estimate,stderr,ci95_lo,ci95_hi,seed\n";
  out.precision(17);
  for (const auto& e : report.estimates) {
    out << report.experiment_id << "," << e.name;
    for (const auto& [_, v] : report.params) out << "," << v;
    out << "," << report.trials << "," << e.value << "," << e.stderr_ << ","
        << e.ci95_lo << "," << e.ci95_hi << "," << report.master_seed << "\n";
  }
  return out.str();
}

std::string report_json(const ExperimentReport& report) {
  json j;
  j["experiment_id"] = report.experiment_id;
  json params = json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  j["params"] = params;
  j["trials"] = report.trials;
  j["seed"] = report.master_seed;
  j["wall_ms"] = report.wall_ms;
  j["estimates"] = json::array();
  for (const auto& e : report.estimates) {
    j["estimates"].push_back({{"name", e.name},
                              {"value", e.value},
                              {"stderr", e.stderr_},
                              {"ci95_lo", e.ci95_lo},
                              {"ci95_hi", e.ci95_hi}});
  }
  return j.dump(2);
}

void write_report_files(const ExperimentReport& report,
                        const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir) / report.experiment_id;
  {
    std::ofstream csv(base.string() + ".csv", std::ios::binary);
    csv << report_csv(report);
  }
  {
    std::ofstream js(base.string() + ".json", std::ios::binary);
    js << report_json(report);
  }
}

}  // namespace uncertlab::cli
