#pragma once

#include "uncertlab/bits.hpp"

namespace uncertlab::reductions {

struct StretchParams {
  std::uint32_t r = 1;  // repetition count, >= 1
  std::uint32_t a = 0;  // append count, >= 0
};

// Indicator of sigma over [d], each bit repeated r times, then a ones
// appended. Returns both the sorted position tuple and the equal support set
// over [d*r + a]; |Sigma| = t*r + a.
struct StretchResult {
  SortedTuple tuple;
  IndexSubset support;
};

StretchResult stretch(const SortedTuple& sigma, const StretchParams& params);

}  // namespace uncertlab::reductions
