#include "uncertlab/distance.hpp"

#include <chrono>

#include "uncertlab/parallel.hpp"

namespace uncertlab::functions {

double distance_exact(const FunctionSpec& f, const FunctionSpec& g,
                      const samplers::DistributionSpec& dist,
                      std::uint64_t budget) {
  f.check_domain(dist);
  g.check_domain(dist);
  double disagree = 0.0;
  samplers::for_each_support_atom(
      dist, budget, [&](const samplers::Draw& d, double p) {
        if (f.evaluate(d) != g.evaluate(d)) disagree += p;
      });
  return disagree;
}

ExperimentReport distance_monte_carlo(const FunctionSpec& f,
                                      const FunctionSpec& g,
                                      const samplers::DistributionSpec& dist,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned workers) {
  if (trials == 0) throw std::invalid_argument("distance_monte_carlo: trials");
  f.check_domain(dist);
  g.check_domain(dist);
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t disagreements = mc_count(
      trials, workers, seed, tag_hash("distance-mc"),
      [&](std::uint64_t, Rng& rng) {
        const samplers::Draw d = samplers::sample(dist, rng);
        return f.evaluate(d) != g.evaluate(d);
      });
  ExperimentReport rep;
  rep.experiment_id = "distance-mc";
  rep.trials = trials;
  rep.master_seed = seed;
  rep.estimates.push_back(bernoulli_estimate("distance", disagreements, trials));
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

}  // namespace uncertlab::functions
