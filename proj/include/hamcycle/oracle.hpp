#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hamcycle/core.hpp"
#include "hamcycle/graph.hpp"
#include "hamcycle/random.hpp"

namespace hamcycle {

struct QueryBudget {
  std::uint64_t per_vertex_cap = 0;
  std::uint64_t total_cap = 0;

  // ceil(100 ln n) per vertex, 60 n overall.
  static QueryBudget defaults(std::size_t n) {
    return {static_cast<std::uint64_t>(std::ceil(100.0 * std::log(static_cast<double>(n)))),
            60 * static_cast<std::uint64_t>(n)};
  }
};

enum class Side { A, B };

// A = [0, half), B = [half, 2 half); for odd n the last vertex is set aside.
struct Bipartition {
  Vertex half = 0;
  std::optional<Vertex> set_aside;

  static Bipartition balanced(std::size_t n) {
    Bipartition part;
    part.half = static_cast<Vertex>(n / 2);
    if (n % 2 == 1) part.set_aside = static_cast<Vertex>(n - 1);
    return part;
  }

  bool in_a(Vertex v) const noexcept { return v < half; }
  bool in_b(Vertex v) const noexcept { return v >= half && v < 2 * half; }
  bool on(Side side, Vertex v) const noexcept { return side == Side::A ? in_a(v) : in_b(v); }
};

// Uniform-with-replacement neighbor sampling over a StoredGraph.
//
// Each edge {v,w} is oriented the first time either endpoint's scan reaches
// it: v->w only, w->v only, both, or neither with probabilities 1/2 - p/4,
// 1/2 - p/4, p/4, p/4. A call on v with d revealed out-neighbors returns one
// of them uniformly with probability d/(n-1); otherwise it scans forward in
// v's shuffled list to the next edge oriented away from v.
class NeighborOracle {
 public:
  NeighborOracle(const StoredGraph& graph, std::uint64_t algo_seed,
                 std::optional<QueryBudget> budget = std::nullopt, bool audit = false)
      : graph_(&graph),
        budget_(budget.value_or(QueryBudget::defaults(graph.vertex_count()))),
        audit_(audit),
        rng_(algo_seed),
        cursor_(graph.vertex_count(), 0),
        out_(graph.vertex_count()),
        calls_(graph.vertex_count(), 0) {
    if (budget_.per_vertex_cap == 0 || budget_.total_cap == 0) {
      throw std::invalid_argument("query budget caps must be positive");
    }
    const double p = graph.edge_probability();
    one_way_ = 0.5 - p / 4.0;
    both_ = 1.0 - p / 4.0;
  }

  const StoredGraph& graph() const noexcept { return *graph_; }
  const QueryBudget& budget() const noexcept { return budget_; }
  std::size_t vertex_count() const noexcept { return graph_->vertex_count(); }

  Vertex new_neighbor(Vertex v) {
    if (calls_[v] >= budget_.per_vertex_cap || total_calls_ >= budget_.total_cap) {
      throw OracleError(OracleFailure::budget_exceeded, v);
    }
    ++calls_[v];
    ++total_calls_;
    const Vertex w = draw(v);
    if (audit_ && !graph_->has_edge(v, w)) {
      throw std::logic_error("oracle returned a non-neighbor");
    }
    return w;
  }

  // Repeats new_neighbor(v) until the answer lies on `target`.
  Vertex bipartite_new_neighbor(Vertex v, Side target, const Bipartition& part) {
    ++bipartite_calls_;
    for (;;) {
      ++bipartite_inner_calls_;
      const Vertex w = new_neighbor(v);
      if (part.on(target, w)) return w;
    }
  }

  // Starts a new exposure epoch for callers that keep neighborhood handles.
  // Orientations, cursors, revealed out-neighbors and call counts persist.
  void reset_exposure() noexcept { ++epoch_; }
  std::uint64_t exposure_epoch() const noexcept { return epoch_; }

  std::uint64_t call_count(Vertex v) const { return calls_[v]; }
  std::uint64_t total_calls() const noexcept { return total_calls_; }
  std::uint64_t max_calls_per_vertex() const {
    return calls_.empty() ? 0 : *std::max_element(calls_.begin(), calls_.end());
  }
  std::span<const Vertex> out_neighbors(Vertex v) const { return out_[v]; }
  std::size_t cursor(Vertex v) const { return cursor_[v]; }
  std::size_t decided_edges() const noexcept { return orientation_.size(); }
  std::uint64_t bipartite_calls() const noexcept { return bipartite_calls_; }
  std::uint64_t bipartite_inner_calls() const noexcept { return bipartite_inner_calls_; }

 private:
  static constexpr std::uint8_t kLowToHigh = 1;
  static constexpr std::uint8_t kHighToLow = 2;

  Vertex draw(Vertex v) {
    auto& revealed = out_[v];
    const std::uint64_t d = revealed.size();
    const std::uint64_t others = graph_->vertex_count() - 1;
    if (d > 0 && rng_.below(others) < d) return revealed[rng_.below(d)];

    const auto row = graph_->adjacency(v);
    while (cursor_[v] < row.size()) {
      const Vertex w = row[cursor_[v]++];
      if (points_away(v, w)) {
        revealed.push_back(w);
        return w;
      }
    }
    throw OracleError(OracleFailure::exhausted, v);
  }

  bool points_away(Vertex v, Vertex w) {
    auto [it, fresh] = orientation_.try_emplace(pair_key(v, w), std::uint8_t{0});
    if (fresh) it->second = decide();
    return (it->second & (v < w ? kLowToHigh : kHighToLow)) != 0;
  }

  std::uint8_t decide() {
    const double u = rng_.unit();
    if (u < one_way_) return kLowToHigh;
    if (u < 2.0 * one_way_) return kHighToLow;
    if (u < both_) return kLowToHigh | kHighToLow;
    return 0;
  }

  const StoredGraph* graph_;
  QueryBudget budget_;
  bool audit_;
  Rng rng_;
  double one_way_ = 0.5;
  double both_ = 1.0;
  std::vector<std::uint32_t> cursor_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::uint64_t> calls_;
  std::unordered_map<std::uint64_t, std::uint8_t> orientation_;
  std::uint64_t total_calls_ = 0;
  std::uint64_t bipartite_calls_ = 0;
  std::uint64_t bipartite_inner_calls_ = 0;
  std::uint64_t epoch_ = 0;
};

// Free-function spellings of the oracle operations.
inline Vertex new_neighbor(NeighborOracle& oracle, Vertex v) { return oracle.new_neighbor(v); }

inline Vertex bipartite_new_neighbor(NeighborOracle& oracle, Vertex v, Side target,
                                     const Bipartition& part) {
  return oracle.bipartite_new_neighbor(v, target, part);
}

inline void reset_exposure(NeighborOracle& oracle) { oracle.reset_exposure(); }

}  // namespace hamcycle
