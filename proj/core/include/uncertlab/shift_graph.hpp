#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "uncertlab/bits.hpp"

namespace uncertlab::reductions {

// Vertices are all sorted t-tuples over [m]; two tuples are adjacent when
// one's length-(t-1) prefix equals the other's suffix. For t = 1 the empty
// overlap always matches, giving the complete graph K_m.
struct ShiftGraph {
  std::uint32_t m = 0;
  std::uint32_t t = 0;
  std::vector<SortedTuple> vertices;
  std::vector<std::vector<std::uint32_t>> adjacency;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t edge_count() const;
};

inline constexpr std::uint64_t kDefaultVertexBudget = 1ull << 16;

ShiftGraph shift_graph(std::uint32_t m, std::uint32_t t,
                       std::uint64_t vertex_budget = kDefaultVertexBudget);

// One vertex per line: tuple, colon, neighbor tuples.
void export_adjacency(const ShiftGraph& g, std::ostream& out);

// Exact chromatic number by branch-and-bound (clique lower bound, greedy
// upper bound, saturation-ordered backtracking).
std::uint32_t chromatic_number_exact(const ShiftGraph& g,
                                     std::size_t vertex_budget = 64);
std::uint32_t chromatic_number_exact(
    const std::vector<std::vector<std::uint32_t>>& adjacency,
    std::size_t vertex_budget = 64);

}  // namespace uncertlab::reductions
