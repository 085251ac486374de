#include "uncertlab/shift_graph.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

#include "uncertlab/math.hpp"

namespace uncertlab::reductions {

std::size_t ShiftGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : adjacency) twice += nb.size();
  return twice / 2;
}

namespace {

void enumerate_tuples(std::uint32_t m, std::uint32_t t,
                      std::vector<std::uint32_t>& cur,
                      std::vector<SortedTuple>& out) {
  if (cur.size() == t) {
    out.emplace_back(cur, m);
    return;
  }
  const std::uint32_t lo = cur.empty() ? 1 : cur.back() + 1;
  for (std::uint32_t v = lo; v <= m; ++v) {
    cur.push_back(v);
    enumerate_tuples(m, t, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ShiftGraph shift_graph(std::uint32_t m, std::uint32_t t,
                       std::uint64_t vertex_budget) {
  if (t == 0 || t > m) throw std::invalid_argument("shift_graph: 1 <= t <= m");
  const double count = binomial_coeff(m, t);
  if (count > static_cast<double>(vertex_budget))
    throw std::length_error("shift_graph: vertex budget exceeded");

  ShiftGraph g;
  g.m = m;
  g.t = t;
  std::vector<std::uint32_t> cur;
  enumerate_tuples(m, t, cur, g.vertices);
  const std::size_t nv = g.vertices.size();
  g.adjacency.assign(nv, {});

  if (t == 1) {
    for (std::uint32_t i = 0; i < nv; ++i)
      for (std::uint32_t j = 0; j < nv; ++j)
        if (i != j) g.adjacency[i].push_back(j);
    return g;
  }

  // bucket vertices by their (t-1)-prefix, then match suffixes
  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> by_prefix;
  for (std::uint32_t i = 0; i < nv; ++i) {
    const auto& vals = g.vertices[i].values();
    by_prefix[std::vector<std::uint32_t>(vals.begin(), vals.end() - 1)]
        .push_back(i);
  }
  for (std::uint32_t i = 0; i < nv; ++i) {
    const auto& vals = g.vertices[i].values();
    auto it = by_prefix.find(std::vector<std::uint32_t>(vals.begin() + 1, vals.end()));
    if (it == by_prefix.end()) continue;
    for (std::uint32_t j : it->second) {
      if (j == i) continue;
      g.adjacency[i].push_back(j);
      g.adjacency[j].push_back(i);
    }
  }
  for (auto& nb : g.adjacency) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

void export_adjacency(const ShiftGraph& g, std::ostream& out) {
  auto print_tuple = [&](const SortedTuple& t) {
    const auto& v = t.values();
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  };
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    print_tuple(g.vertices[i]);
    out << ":";
    for (auto j : g.adjacency[i]) {
      out << " ";
      print_tuple(g.vertices[j]);
    }
    out << "\n";
  }
}

namespace {

// Greedy clique on highest-degree vertices; any clique is a valid lower bound.
std::uint32_t greedy_clique(const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return adj[a].size() > adj[b].size();
  });
  std::uint32_t best = 1;
  std::vector<char> in_adj(n, 0);
  for (std::uint32_t s = 0; s < n && s < 16; ++s) {
    std::vector<std::uint32_t> clique = {order[s]};
    for (std::uint32_t cand : adj[order[s]]) {
      bool ok = true;
      for (std::uint32_t c : clique) {
        if (!std::binary_search(adj[c].begin(), adj[c].end(), cand)) {
          ok = false;
          break;
        }
      }
      if (ok) clique.push_back(cand);
    }
    best = std::max(best, static_cast<std::uint32_t>(clique.size()));
  }
  return best;
}

struct Coloring {
  const std::vector<std::vector<std::uint32_t>>& adj;
  std::vector<std::uint32_t> color;        // 0 = uncolored, else 1..k
  std::uint32_t limit = 0;

  bool feasible(std::uint32_t v, std::uint32_t c) const {
    for (auto u : adj[v])
      if (color[u] == c) return false;
    return true;
  }

  // saturation-ordered backtracking over a fixed color budget
  bool solve(std::size_t colored) {
    const std::size_t n = adj.size();
    if (colored == n) return true;
    // pick the uncolored vertex with the most distinctly colored neighbors
    std::uint32_t pick = 0;
    int best_sat = -1, best_deg = -1;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (color[v]) continue;
      std::uint64_t seen = 0;
      for (auto u : adj[v])
        if (color[u]) seen |= 1ull << (color[u] - 1);
      const int sat = std::popcount(seen);
      const int deg = static_cast<int>(adj[v].size());
      if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
        best_sat = sat;
        best_deg = deg;
        pick = v;
      }
    }
    std::uint32_t used = 0;
    for (auto c : color) used = std::max(used, c);
    const std::uint32_t try_up_to = std::min(limit, used + 1);
    for (std::uint32_t c = 1; c <= try_up_to; ++c) {
      if (!feasible(pick, c)) continue;
      color[pick] = c;
      if (solve(colored + 1)) return true;
      color[pick] = 0;
    }
    return false;
  }
};

bool colorable(const std::vector<std::vector<std::uint32_t>>& adj,
               std::uint32_t k) {
  Coloring c{adj, std::vector<std::uint32_t>(adj.size(), 0), k};
  return c.solve(0);
}

}  // namespace

std::uint32_t chromatic_number_exact(
    const std::vector<std::vector<std::uint32_t>>& adjacency,
    std::size_t vertex_budget) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw std::invalid_argument("chromatic: empty graph");
  if (n > vertex_budget)
    throw std::length_error("chromatic: vertex budget exceeded");
  auto adj = adjacency;
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  // greedy upper bound
  std::uint32_t ub = 0;
  {
    std::vector<std::uint32_t> color(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
      std::uint64_t used = 0;
      for (auto u : adj[v])
        if (color[u]) used |= 1ull << (color[u] - 1);
      std::uint32_t c = 1;
      while (used & (1ull << (c - 1))) ++c;
      color[v] = c;
      ub = std::max(ub, c);
    }
  }
  std::uint32_t lb = greedy_clique(adj);
  for (std::uint32_t k = lb; k < ub; ++k)
    if (colorable(adj, k)) return k;
  return ub;
}

std::uint32_t chromatic_number_exact(const ShiftGraph& g,
                                     std::size_t vertex_budget) {
  return chromatic_number_exact(g.adjacency, vertex_budget);
}

}  // namespace uncertlab::reductions
