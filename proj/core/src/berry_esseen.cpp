#include "uncertlab/berry_esseen.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uncertlab/math.hpp"
#include "uncertlab/parallel.hpp"

namespace uncertlab::verifiers {

double pair_sum_lambda_min(double delta_prime) {
  const double c = 1.0 - delta_prime;
  return c / 2.0 - std::sqrt(5.0 * c * c - 2.0 * c + 1.0) / 2.0 + 0.5;
}

GaussianCheckReport berry_esseen_check(double delta_prime, std::uint32_t ell,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned workers) {
  if (ell < 16) throw std::invalid_argument("berry_esseen_check: ell >= 16");
  if (!(delta_prime >= 0.0 && delta_prime < 1.0))
    throw std::invalid_argument("berry_esseen_check: delta' in [0,1)");

  GaussianCheckReport rep;
  rep.ell = ell;
  rep.trials = trials;

  // |S| is rounded to a whole coordinate count; predictions use the
  // effective fraction actually realized.
  const auto shared =
      static_cast<std::uint32_t>(std::llround((1.0 - delta_prime) * ell));
  const double eff_delta = 1.0 - static_cast<double>(shared) / ell;
  rep.delta_prime = eff_delta;
  delta_prime = eff_delta;

  const std::uint32_t words = (ell + 63) / 64;
  const std::uint64_t tail_mask =
      (ell % 64) ? ((~0ull) >> (64 - (ell % 64))) : ~0ull;
  // Y' keeps the first `shared` coordinates
  std::vector<std::uint64_t> smask(words, 0ull);
  for (std::uint32_t i = 0; i < shared; ++i) smask[i >> 6] |= 1ull << (i & 63);

  const std::uint64_t nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
  struct Partial {
    std::array<std::uint64_t, 4> orthant{};
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
  };
  std::vector<Partial> parts(nblocks);

  run_blocks(trials, workers, [&](const BlockRange& br) {
    Partial& pt = parts[br.index];
    for (std::uint64_t i = br.begin; i < br.end; ++i) {
      Rng rng = Rng::substream(seed, {tag_hash("berry-esseen"), i});
      std::int64_t xsum = 0, ysum = 0;
      for (std::uint32_t w = 0; w < words; ++w) {
        const std::uint64_t mask = (w + 1 == words) ? tail_mask : ~0ull;
        const std::uint64_t z = rng.next_u64() & mask;
        const auto bits = static_cast<std::int64_t>(std::popcount(mask));
        xsum += bits - 2 * static_cast<std::int64_t>(std::popcount(z));
        const std::uint64_t zs = z & smask[w];
        const auto sbits = static_cast<std::int64_t>(std::popcount(smask[w] & mask));
        ysum += sbits - 2 * static_cast<std::int64_t>(std::popcount(zs));
      }
      const int ox = sign_bit(xsum);
      const int oy = sign_bit(ysum);
      ++pt.orthant[static_cast<std::size_t>(2 * ox + oy)];
      const double xd = static_cast<double>(xsum);
      const double yd = static_cast<double>(ysum);
      pt.sxx += xd * xd;
      pt.sxy += xd * yd;
      pt.syy += yd * yd;
    }
  });

  std::array<std::uint64_t, 4> orthant{};
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& pt : parts) {
    for (int i = 0; i < 4; ++i) orthant[i] += pt.orthant[i];
    sxx += pt.sxx;
    sxy += pt.sxy;
    syy += pt.syy;
  }

  const double nd = static_cast<double>(trials);
  const double ld = static_cast<double>(ell);
  rep.cov_xx = sxx / nd / ld;
  rep.cov_xy = sxy / nd / ld;
  rep.cov_yy = syy / nd / ld;

  // Gaussian orthants at correlation sqrt(1-delta'):
  // P(++) = 1/4 + arcsin(c)/(2pi); P(+-) = P(-+) = sheppard(c)/2.
  const double corr = std::sqrt(1.0 - delta_prime);
  const double ppp = 0.25 + std::asin(corr) / (2.0 * M_PI);
  const double pmix = sheppard(corr) / 2.0;
  rep.predicted = {ppp, pmix, pmix, ppp};  // (-,-) = (+,+) by symmetry

  rep.lambda_min = pair_sum_lambda_min(delta_prime);
  rep.degenerate = rep.lambda_min <= 0.0;
  rep.predicted_error_scale =
      rep.degenerate ? std::numeric_limits<double>::infinity()
                     : 1.0 / (std::pow(rep.lambda_min, 1.5) * std::sqrt(ld));

  for (int i = 0; i < 4; ++i) {
    rep.empirical[i] = static_cast<double>(orthant[i]) / nd;
    rep.max_abs_deviation =
        std::max(rep.max_abs_deviation,
                 std::abs(rep.empirical[i] - rep.predicted[i]));
  }
  return rep;
}

}  // namespace uncertlab::verifiers
