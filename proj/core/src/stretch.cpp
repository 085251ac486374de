#include "uncertlab/stretch.hpp"

namespace uncertlab::reductions {

StretchResult stretch(const SortedTuple& sigma, const StretchParams& params) {
  if (params.r < 1) throw std::invalid_argument("stretch: r >= 1");
  const std::uint32_t d = sigma.bound();
  const std::uint32_t out_n = d * params.r + params.a;
  std::vector<std::uint32_t> ones;
  ones.reserve(sigma.size() * params.r + params.a);
  for (auto v : sigma.values())
    for (std::uint32_t j = 1; j <= params.r; ++j)
      ones.push_back((v - 1) * params.r + j);
  for (std::uint32_t j = 1; j <= params.a; ++j) ones.push_back(d * params.r + j);
  SortedTuple tuple(ones, out_n);
  IndexSubset support(std::move(ones), out_n);
  return {std::move(tuple), std::move(support)};
}

}  // namespace uncertlab::reductions
