#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamcycle/core.hpp"
#include "hamcycle/graph.hpp"

namespace hamcycle {

// Cyclic vertex order; the closing edge back to front() is implicit.
struct HamiltonCycle {
  std::vector<Vertex> order;
};

struct Verdict {
  bool ok = false;
  std::string violation;  // empty when ok

  explicit operator bool() const noexcept { return ok; }
};

// Sound and complete O(n) check: every vertex exactly once, then every
// consecutive pair including the wraparound is an edge. Vertex-set problems
// are reported before edge problems.
inline Verdict verify_hamilton_cycle(const StoredGraph& g, std::span<const Vertex> cycle) {
  const std::size_t n = g.vertex_count();
  std::vector<char> seen(n, 0);
  for (Vertex v : cycle) {
    if (v >= n) return {false, "vertex " + std::to_string(v) + " out of range"};
    if (seen[v]) return {false, "duplicate vertex " + std::to_string(v)};
    seen[v] = 1;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!seen[v]) return {false, "missing vertex " + std::to_string(v)};
  }
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Vertex u = cycle[i];
    const Vertex w = cycle[(i + 1) % cycle.size()];
    if (!g.has_edge(u, w)) {
      return {false, "non-edge {" + std::to_string(u) + "," + std::to_string(w) + "}"};
    }
  }
  return {true, {}};
}

inline Verdict verify_hamilton_cycle(const StoredGraph& g, const HamiltonCycle& cycle) {
  return verify_hamilton_cycle(g, std::span<const Vertex>(cycle.order));
}

// Exhaustive backtracking from vertex 0; refuses n > 12.
inline std::optional<HamiltonCycle> brute_force_hamilton(const StoredGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 12) throw std::invalid_argument("brute_force_hamilton: n > 12 refused");
  if (n < 3) return std::nullopt;

  std::vector<Vertex> path{0};
  std::uint32_t visited = 1;
  const auto full = static_cast<std::uint32_t>((1u << n) - 1);

  auto extend = [&](auto&& self) -> bool {
    const Vertex last = path.back();
    if (visited == full) return g.has_edge(last, 0);
    for (Vertex w : g.sorted_neighbors(last)) {
      if (visited & (1u << w)) continue;
      visited |= 1u << w;
      path.push_back(w);
      if (self(self)) return true;
      path.pop_back();
      visited &= ~(1u << w);
    }
    return false;
  };
  if (!extend(extend)) return std::nullopt;
  return HamiltonCycle{path};
}

}  // namespace hamcycle
