#include "uncertlab/shift_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uncertlab/math.hpp"

namespace uncertlab::reductions {

ShiftReductionParams ShiftReductionParams::from_protocol(double epsilon,
                                                         std::uint64_t delta_num,
                                                         std::uint64_t delta_den,
                                                         std::uint64_t ell,
                                                         double eta) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("shift reduction: epsilon in (0, 0.5]");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("shift reduction: eta in (0,1)");
  if (delta_num == 0 || delta_den == 0 || delta_num >= delta_den)
    throw std::invalid_argument("shift reduction: delta' in (0,1) as a fraction");

  ShiftReductionParams p;
  p.epsilon = epsilon;
  p.eta = eta;
  p.eps_prime = 1.0 - std::cos(epsilon * M_PI);
  const double dp = static_cast<double>(delta_num) / static_cast<double>(delta_den);
  p.t = static_cast<std::uint64_t>(std::ceil(p.eps_prime / dp - 1e-12));
  if ((ell * delta_num) % delta_den != 0)
    throw std::invalid_argument(
        "shift reduction: ell must be a multiple of delta'’s denominator (r "
        "= delta'*ell must be integral)");
  p.r = ell * delta_num / delta_den;
  if (p.r < 1) throw std::invalid_argument("shift reduction: r >= 1");
  if (p.t * p.r > ell)
    throw std::invalid_argument("shift reduction: a = ell*(1-t*delta') < 0");
  p.a = ell - p.t * p.r;
  p.s = ell - p.r;
  p.ell = ell;
  if (p.s != (p.t - 1) * p.r + p.a)
    throw std::logic_error("shift reduction: stretched length inconsistent");
  p.k = static_cast<std::uint64_t>(std::ceil(4.0 / (eta * eta)));
  return p;
}

ShiftReductionParams ShiftReductionParams::from_raw(std::uint64_t t,
                                                    std::uint64_t r,
                                                    std::uint64_t a) {
  if (t < 1 || r < 1) throw std::invalid_argument("shift reduction: t,r >= 1");
  ShiftReductionParams p;
  p.t = t;
  p.r = r;
  p.a = a;
  p.ell = t * r + a;
  p.s = (t - 1) * r + a;
  return p;
}

std::pair<int, int> prefix_suffix_scores(const SortedTuple& lambda,
                                         const SortedTuple& phi,
                                         const SortedTuple& psi,
                                         const SignVector& x,
                                         const SignVector& y) {
  const std::size_t s = lambda.size();
  if (phi.size() != s || psi.size() != s)
    throw std::invalid_argument("prefix_suffix_scores: tuple length mismatch");
  std::int64_t gsum = 0, hsum = 0;
  for (std::size_t j = 0; j < s; ++j) {
    const int xa = x[lambda[j] - 1];
    gsum += xa * y[phi[j] - 1];
    hsum += xa * y[psi[j] - 1];
  }
  return {sign_bit(gsum), sign_bit(hsum)};
}

ShiftGameOutcome shift_game_reduction(const ShiftGameInstance& instance,
                                      const ShiftReductionParams& params,
                                      const BlackBoxProtocol& black_box,
                                      Rng& rng) {
  if (params.k == 0)
    throw std::invalid_argument("shift_game_reduction: trial count unset");
  const SortedTuple& sigma = instance.sigma;
  if (sigma.size() != params.t)
    throw std::invalid_argument("shift_game_reduction: |sigma| != t");
  const StretchParams sp = params.stretch_params();

  const SortedTuple lambda = instance.alice_side == ShiftGameInstance::Side::Prefix
                                 ? sigma.prefix()
                                 : sigma.suffix();
  auto [lam, s_set] = stretch(lambda, sp);
  auto [sig, t_set] = stretch(sigma, sp);
  auto [phi, phi_set] = stretch(sigma.prefix(), sp);
  auto [psi, psi_set] = stretch(sigma.suffix(), sp);
  const std::size_t n = sig.bound();

  // precomputed 0-based gather indices for the hot loop
  const std::size_t s = lam.size();
  std::vector<std::uint32_t> li(s), pi(s), qi(s);
  for (std::size_t j = 0; j < s; ++j) {
    li[j] = lam[j] - 1;
    pi[j] = phi[j] - 1;
    qi[j] = psi[j] - 1;
  }

  ShiftGameOutcome out;
  for (std::uint64_t trial = 0; trial < params.k; ++trial) {
    const SignVector x = SignVector::random(n, rng);
    const SignVector y = SignVector::random(n, rng);
    const int b = black_box.evaluate(s_set, x, t_set, y, rng);
    std::int64_t gsum = 0, hsum = 0;
    const auto& xb = x.as_bits();
    const auto& yb = y.as_bits();
    for (std::size_t j = 0; j < s; ++j) {
      const int xa = xb.get(li[j]) ? -1 : 1;
      gsum += xb.get(li[j]) == yb.get(pi[j]) ? 1 : -1;
      hsum += xa * (yb.get(qi[j]) ? -1 : 1);
    }
    if (sign_bit(gsum) != b) ++out.err_prefix;
    if (sign_bit(hsum) != b) ++out.err_suffix;
  }
  out.yes = out.err_prefix <= out.err_suffix;
  out.bits_consumed = params.k * (black_box.cost_bits + s);
  return out;
}

namespace {

// 12-bit zero-interleave via byte table
std::uint32_t spread_bits(std::uint32_t v) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t b = 0; b < 256; ++b) {
      std::uint32_t r = 0;
      for (int i = 0; i < 8; ++i)
        if (b & (1u << i)) r |= 1u << (2 * i);
      t[b] = r;
    }
    return t;
  }();
  return table[v & 0xff] | (table[(v >> 8) & 0xff] << 16);
}

}  // namespace

bool verify_indep_coord(const ShiftGameInstance& instance,
                        const ShiftReductionParams& params,
                        std::uint32_t enumeration_bit_budget) {
  const StretchParams sp = params.stretch_params();
  const SortedTuple& sigma = instance.sigma;
  if (sigma.size() != params.t)
    throw std::invalid_argument("verify_indep_coord: |sigma| != t");
  if (params.t < 2)
    throw std::invalid_argument("verify_indep_coord: t >= 2");

  const SortedTuple lambda = instance.alice_side == ShiftGameInstance::Side::Prefix
                                 ? sigma.prefix()
                                 : sigma.suffix();
  const SortedTuple lam = stretch(lambda, sp).tuple;
  const SortedTuple phi = stretch(sigma.prefix(), sp).tuple;
  const SortedTuple psi = stretch(sigma.suffix(), sp).tuple;
  const std::size_t s = lam.size();
  if (s > 12)
    throw std::length_error("verify_indep_coord: s <= 12 for exact enumeration");

  // Relevant coordinates: X over Lambda's values (already sorted, position j
  // holds X_{Lambda_j}); Y over the union of Phi's and Psi's values.
  std::vector<std::uint32_t> yrel;
  yrel.reserve(2 * s);
  for (std::size_t j = 0; j < s; ++j) {
    yrel.push_back(phi[j]);
    yrel.push_back(psi[j]);
  }
  std::sort(yrel.begin(), yrel.end());
  yrel.erase(std::unique(yrel.begin(), yrel.end()), yrel.end());
  const std::size_t ny = yrel.size();
  if (s + ny > enumeration_bit_budget)
    throw std::length_error("verify_indep_coord: enumeration budget exceeded");

  auto ypos = [&](std::uint32_t v) {
    return static_cast<std::uint32_t>(
        std::lower_bound(yrel.begin(), yrel.end(), v) - yrel.begin());
  };
  std::vector<std::uint32_t> phi_pos(s), psi_pos(s);
  for (std::size_t j = 0; j < s; ++j) {
    phi_pos[j] = ypos(phi[j]);
    psi_pos[j] = ypos(psi[j]);
  }

  // Joint counts over the s pairs; pair j encodes
  // bit(X_{Lambda_j} Y_{Phi_j}) at 2j and bit(X_{Lambda_j} Y_{Psi_j}) at 2j+1,
  // with bit 0 <-> product +1.
  std::vector<std::uint32_t> counts(1ull << (2 * s), 0);
  const std::uint64_t ny_states = 1ull << ny;
  const std::uint64_t nx_states = 1ull << s;
  for (std::uint64_t ya = 0; ya < ny_states; ++ya) {
    std::uint32_t yphi = 0, ypsi = 0;
    for (std::size_t j = 0; j < s; ++j) {
      yphi |= static_cast<std::uint32_t>((ya >> phi_pos[j]) & 1u) << j;
      ypsi |= static_cast<std::uint32_t>((ya >> psi_pos[j]) & 1u) << j;
    }
    for (std::uint64_t xa = 0; xa < nx_states; ++xa) {
      const std::uint32_t b1 = static_cast<std::uint32_t>(xa) ^ yphi;
      const std::uint32_t b2 = static_cast<std::uint32_t>(xa) ^ ypsi;
      const std::uint32_t atom = spread_bits(b1) | (spread_bits(b2) << 1);
      ++counts[atom];
    }
  }

  // Product law with the stated marginals: uniform over 4 values for the
  // first s-a coordinates, uniform on the diagonal for the last a.
  const std::uint64_t total = nx_states * ny_states;
  const std::size_t diag_from = s - std::min<std::size_t>(s, sp.a);
  const std::uint32_t uniform_coords = static_cast<std::uint32_t>(diag_from);
  const std::uint32_t shift = 2 * uniform_coords +
                              static_cast<std::uint32_t>(s - diag_from);
  const std::uint64_t expected_nonzero = total >> shift;
  for (std::uint64_t atom = 0; atom < counts.size(); ++atom) {
    bool diag_ok = true;
    for (std::size_t j = diag_from; j < s; ++j) {
      const std::uint32_t b1 = (atom >> (2 * j)) & 1u;
      const std::uint32_t b2 = (atom >> (2 * j + 1)) & 1u;
      if (b1 != b2) {
        diag_ok = false;
        break;
      }
    }
    const std::uint64_t expected = diag_ok ? expected_nonzero : 0;
    if (counts[atom] != expected) return false;
  }
  return true;
}

}  // namespace uncertlab::reductions
