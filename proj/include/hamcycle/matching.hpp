#pragma once

// Phase 1: a perfect matching of the balanced bipartite view by augmenting
// random walks, with the unmatched A-side keeping a growing d-neighborhood
// (the first ceil(d) bipartite oracle answers of each vertex) that the walks
// can stop on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hamcycle/core.hpp"
#include "hamcycle/oracle.hpp"

namespace hamcycle {

// min(sqrt(n / t), ln n): exposure depth while t A-vertices are unmatched.
inline double d_schedule(std::size_t n, std::size_t t) {
  if (t == 0) throw std::invalid_argument("d_schedule: t must be positive");
  const double dn = static_cast<double>(n);
  return std::min(std::sqrt(dn / static_cast<double>(t)), std::log(dn));
}

class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t n) : mate_(n, kNoVertex) {}

  std::size_t vertex_count() const noexcept { return mate_.size(); }
  std::size_t size() const noexcept { return pairs_; }
  bool matched(Vertex v) const { return mate_[v] != kNoVertex; }
  Vertex partner(Vertex v) const { return mate_[v]; }

  void add(Vertex a, Vertex b) {
    if (matched(a) || matched(b)) throw std::logic_error("matching: vertex already matched");
    mate_[a] = b;
    mate_[b] = a;
    ++pairs_;
  }

  void remove(Vertex a) {
    const Vertex b = mate_[a];
    if (b == kNoVertex) return;
    mate_[a] = mate_[b] = kNoVertex;
    --pairs_;
  }

  bool perfect_on(const Bipartition& part) const {
    if (pairs_ != part.half) return false;
    for (Vertex a = 0; a < part.half; ++a) {
      if (!matched(a) || !part.in_b(mate_[a])) return false;
    }
    return true;
  }

 private:
  std::vector<Vertex> mate_;
  std::size_t pairs_ = 0;
};

// Unmatched A-vertices with O(1) membership and removal.
class UnmatchedSet {
 public:
  UnmatchedSet() = default;
  UnmatchedSet(std::size_t n, Vertex count) : pos_(n, kNoVertex) {
    items_.reserve(count);
    for (Vertex v = 0; v < count; ++v) {
      pos_[v] = v;
      items_.push_back(v);
    }
  }
  bool contains(Vertex v) const { return pos_[v] != kNoVertex; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const std::vector<Vertex>& items() const noexcept { return items_; }
  void erase(Vertex v) {
    const Vertex i = pos_[v];
    const Vertex last = items_.back();
    items_[i] = last;
    pos_[last] = i;
    items_.pop_back();
    pos_[v] = kNoVertex;
  }

 private:
  std::vector<Vertex> items_;
  std::vector<Vertex> pos_;
};

struct NeighborhoodState {
  std::uint32_t depth = 0;
  std::vector<std::vector<Vertex>> exposed;  // by A-vertex in A0
  std::vector<std::vector<Vertex>> inverse;  // by B-vertex: A0 vertices exposing it

  explicit NeighborhoodState(std::size_t n = 0) : exposed(n), inverse(n) {}

  // Smallest A0 vertex that exposed b, or kNoVertex.
  Vertex exposer_of(Vertex b) const {
    const auto& who = inverse[b];
    return who.empty() ? kNoVertex : *std::min_element(who.begin(), who.end());
  }

  // Drops a's entries once a leaves A0.
  void purge(Vertex a) {
    for (Vertex b : exposed[a]) {
      auto& who = inverse[b];
      auto it = std::find(who.begin(), who.end(), a);
      *it = who.back();
      who.pop_back();
    }
    exposed[a].clear();
  }
};

struct MatchingStats {
  std::uint64_t exposed_edges = 0;    // bipartite calls made by expose_level
  std::uint64_t walk_calls = 0;       // bipartite calls made by increase_matching
  std::uint64_t swap_steps = 0;       // branch (c) iterations
  std::uint64_t neighborhood_hits = 0;  // branch (a) matches
  std::uint64_t oracle_calls = 0;
  std::uint32_t final_depth = 0;
  // walk_length[i]: branch (c) iterations of the call that started with |A0| = i.
  std::vector<std::uint32_t> walk_length;
};

struct MatchingRun {
  Matching matching;
  NeighborhoodState hood;
  UnmatchedSet unmatched;
  const Bipartition* part = nullptr;
  MatchingStats* stats = nullptr;
};

// Adds exactly one pair, starting from the unmatched B-vertex v.
inline void increase_matching(NeighborOracle& oracle, MatchingRun& run, Vertex v) {
  const std::size_t start_unmatched = run.unmatched.size();
  std::uint32_t steps = 0;
  auto settle = [&](Vertex a, Vertex b) {
    run.matching.add(a, b);
    run.unmatched.erase(a);
    run.hood.purge(a);
    if (run.stats != nullptr && run.stats->walk_length.size() > start_unmatched) {
      run.stats->walk_length[start_unmatched] = steps;
    }
  };
  for (;;) {
    if (const Vertex a = run.hood.exposer_of(v); a != kNoVertex) {
      if (run.stats != nullptr) ++run.stats->neighborhood_hits;
      settle(a, v);
      return;
    }
    const Vertex w = oracle.bipartite_new_neighbor(v, Side::A, *run.part);
    if (run.stats != nullptr) ++run.stats->walk_calls;
    if (run.unmatched.contains(w)) {
      settle(w, v);
      return;
    }
    const Vertex u = run.matching.partner(w);
    run.matching.remove(w);
    run.matching.add(w, v);
    v = u;
    ++steps;
    if (run.stats != nullptr) ++run.stats->swap_steps;
  }
}

// One more bipartite answer for every vertex of A0.
inline void expose_level(NeighborOracle& oracle, MatchingRun& run) {
  ++run.hood.depth;
  for (Vertex a : run.unmatched.items()) {
    const Vertex b = oracle.bipartite_new_neighbor(a, Side::B, *run.part);
    run.hood.exposed[a].push_back(b);
    run.hood.inverse[b].push_back(a);
  }
  if (run.stats != nullptr) run.stats->exposed_edges += run.unmatched.size();
}

// Perfect matching of A = [0, half) with B = [half, 2 half). B0 is consumed in
// ascending id order; the depth loop re-reads |A0| on every iteration.
// Oracle errors propagate.
inline Matching fast_perfect_matching(NeighborOracle& oracle, const Bipartition& part,
                                      MatchingStats* stats = nullptr) {
  const std::size_t n = oracle.vertex_count();
  if (part.half == 0) throw std::invalid_argument("fast_perfect_matching: empty bipartition");
  const std::uint64_t calls_before = oracle.total_calls();
  MatchingRun run{Matching(n), NeighborhoodState(n), UnmatchedSet(n, part.half), &part, stats};
  if (stats != nullptr) stats->walk_length.assign(part.half + 1, 0);
  const double log_n = std::log(static_cast<double>(n));

  for (Vertex v = part.half; v < 2 * part.half; ++v) {
    increase_matching(oracle, run, v);
    for (;;) {
      const double target =
          run.unmatched.empty() ? log_n : d_schedule(n, run.unmatched.size());
      if (!(run.hood.depth < target)) break;
      expose_level(oracle, run);
    }
  }
  if (stats != nullptr) {
    stats->oracle_calls = oracle.total_calls() - calls_before;
    stats->final_depth = run.hood.depth;
  }
  return std::move(run.matching);
}

}  // namespace hamcycle
