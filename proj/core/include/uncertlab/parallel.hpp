#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "uncertlab/rng.hpp"

namespace uncertlab {

// Deterministic work partitioning: trials are split into fixed-size blocks
// whose boundaries and substreams depend only on the master seed and block
// index, never on the worker count. Per-block partial results are reduced
// sequentially in block order, so reported values are byte-identical for any
// number of workers.
inline constexpr std::uint64_t kTrialBlock = 4096;

struct BlockRange {
  std::uint64_t index;
  std::uint64_t begin;
  std::uint64_t end;
};

inline void run_blocks(std::uint64_t total, unsigned workers,
                       const std::function<void(const BlockRange&)>& body,
                       std::uint64_t block_size = kTrialBlock) {
  if (total == 0) return;
  const std::uint64_t nblocks = (total + block_size - 1) / block_size;
  if (workers <= 1 || nblocks == 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b)
      body({b, b * block_size, std::min(total, (b + 1) * block_size)});
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      body({b, b * block_size, std::min(total, (b + 1) * block_size)});
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(nblocks));
  pool.reserve(n);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Count Bernoulli successes over `trials` independent draws. `trial` gets a
// substream derived from (master, tag, trial index) and must be pure in it.
inline std::uint64_t mc_count(std::uint64_t trials, unsigned workers,
                              std::uint64_t master, std::uint64_t tag,
                              const std::function<bool(std::uint64_t, Rng&)>& trial) {
  const std::uint64_t nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::uint64_t> partial(nblocks, 0);
  run_blocks(trials, workers, [&](const BlockRange& br) {
    std::uint64_t c = 0;
    for (std::uint64_t i = br.begin; i < br.end; ++i) {
      Rng rng = Rng::substream(master, {tag, i});
      if (trial(i, rng)) ++c;
    }
    partial[br.index] = c;
  });
  std::uint64_t total = 0;
  for (auto c : partial) total += c;  // fixed order
  return total;
}

// Sum a real-valued statistic; same determinism contract as mc_count.
inline std::pair<double, double> mc_sum(
    std::uint64_t trials, unsigned workers, std::uint64_t master,
    std::uint64_t tag, const std::function<double(std::uint64_t, Rng&)>& trial) {
  const std::uint64_t nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<double> psum(nblocks, 0.0), psq(nblocks, 0.0);
  run_blocks(trials, workers, [&](const BlockRange& br) {
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = br.begin; i < br.end; ++i) {
      Rng rng = Rng::substream(master, {tag, i});
      const double v = trial(i, rng);
      s += v;
      s2 += v * v;
    }
    psum[br.index] = s;
    psq[br.index] = s2;
  });
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    sum += psum[b];
    sq += psq[b];
  }
  return {sum, sq};
}

}  // namespace uncertlab
