#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace uncertlab {

// SplitMix64 finalizer. Used both as a bit mixer for substream derivation
// and as the seeding procedure for the main generator.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based splittable PRNG contract: substream i of master seed s is
// derived by hashing (s, i); no sequential state is shared across workers,
// so identical seeds give identical draws for any worker count.
class Rng {
 public:
  Rng() : Rng(0) {}

  explicit Rng(std::uint64_t key) {
    std::uint64_t z = key;
    for (auto& w : state_) {
      z = splitmix64(z + 0x9e3779b97f4a7c15ull);
      w = z;
    }
    // xoshiro must not start at the all-zero state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[3] = 1;
  }

  static std::uint64_t derive_key(std::uint64_t master,
                                  std::initializer_list<std::uint64_t> path) {
    std::uint64_t key = splitmix64(master ^ 0x5bf0363546069f79ull);
    for (std::uint64_t id : path) key = splitmix64(key ^ splitmix64(id));
    return key;
  }

  static Rng substream(std::uint64_t master,
                       std::initializer_list<std::uint64_t> path) {
    return Rng(derive_key(master, path));
  }

  // xoshiro256++
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0,1) with 53 random bits
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

  bool bernoulli(double p) { return next_double() < p; }

  // unbiased integer in [0, n) (Lemire rejection)
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = -n % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // standard normal via the polar method (second value discarded so that
  // replaying a substream never depends on call parity)
  double normal() {
    for (;;) {
      const double u = 2.0 * next_double() - 1.0;
      const double v = 2.0 * next_double() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// 64 independent Bernoulli(p) bits per draw, via the binary expansion of p
// at 2^-53 resolution (exact for dyadic p such as 1/4 or 3/8). Levels run
// from the least significant set digit upward; cost is one word draw per
// level, zero for p = 0.
class BiasedBits {
 public:
  explicit BiasedBits(double p) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("BiasedBits: p in [0,1]");
    if (p == 1.0) {
      all_ones_ = true;
      return;
    }
    auto pnum = static_cast<std::uint64_t>(std::llround(std::ldexp(p, 53)));
    if (pnum == 0) return;
    for (int i = std::countr_zero(pnum); i < 53; ++i)
      levels_.push_back(static_cast<int>((pnum >> i) & 1u));
  }

  std::uint64_t draw(Rng& rng) const {
    if (all_ones_) return ~0ull;
    std::uint64_t lt = 0;
    for (int level : levels_) {
      const std::uint64_t w = rng.next_u64();
      lt = level ? (~w | lt) : (~w & lt);
    }
    return lt;
  }

  bool trivial_zero() const { return !all_ones_ && levels_.empty(); }

 private:
  std::vector<int> levels_;
  bool all_ones_ = false;
};

// FNV-1a of a short tag, for deriving experiment-scoped substreams by name.
constexpr std::uint64_t tag_hash(const char* s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  while (*s) {
    h ^= static_cast<unsigned char>(*s++);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace uncertlab
