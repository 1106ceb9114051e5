#pragma once

// Reference random-walk solver for order-of-growth comparison (non-normative
// reading of the classic greedy-walk-with-rotations scheme).
//
// The walk extends the path from its end with new_neighbor answers. Once
// |P| >= n/2, an answer v_{i+1} on the path with s - i >= n/2 detaches the
// cycle (v_{i+1} .. v_s) (closed by the edge just found) and the walk resumes
// from v_i. Hitting a vertex of the detached cycle re-attaches it, cut at the
// hit vertex and running in the direction that ends next to it on the cycle;
// detach + re-attach is one Posa rotation. With |P| = n an answer equal to
// p_start closes the Hamilton cycle. Any other answer is a wasted query.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "hamcycle/core.hpp"
#include "hamcycle/cycle_join.hpp"
#include "hamcycle/graph.hpp"
#include "hamcycle/oracle.hpp"
#include "hamcycle/path_seq.hpp"
#include "hamcycle/random.hpp"
#include "hamcycle/stats.hpp"
#include "hamcycle/verify.hpp"

namespace hamcycle {

struct BaselineConfig {
  // Give-up threshold on total oracle calls; default ceil(40 n ln n). The
  // per-vertex cap is lifted to the same value.
  std::optional<std::uint64_t> total_cap;
};

inline SolveResult baseline_angluin_valiant(const StoredGraph& g, std::uint64_t algo_seed,
                                            const BaselineConfig& config = {}) {
  using clock = std::chrono::steady_clock;
  const std::size_t n = g.vertex_count();
  if (n < 4) throw std::invalid_argument("baseline_angluin_valiant: n must be at least 4");
  const std::uint64_t cap = config.total_cap.value_or(static_cast<std::uint64_t>(
      std::ceil(40.0 * static_cast<double>(n) * std::log(static_cast<double>(n)))));

  SolveResult result;
  RunStats& stats = result.stats;
  stats.n = n;
  stats.p = g.edge_probability();
  stats.graph_seed = g.seed();
  stats.algo_seed = algo_seed;

  NeighborOracle oracle(g, algo_seed, QueryBudget{cap, cap});
  Rng rng(derive_seed(algo_seed, 0xba5e));
  PathForest forest(n);
  const Vertex first = static_cast<Vertex>(rng.below(n));
  PathSeq path = forest.from_sequence(std::span<const Vertex>(&first, 1));
  PathSeq detached;
  const auto t0 = clock::now();

  try {
    for (;;) {
      const Vertex end = path.end();
      const Vertex w = oracle.new_neighbor(end);
      if (!forest.in_use(w)) {
        path = concat(std::move(path), forest.from_sequence(std::span<const Vertex>(&w, 1)));
        continue;
      }
      if (!detached.empty() && detached.contains(w)) {
        PathSeq piece;
        if (w == detached.start()) {
          piece = std::move(detached);
        } else {
          auto [front, back] = split_before(std::move(detached), w);
          piece = concat(std::move(back), std::move(front));
        }
        path = concat(std::move(path), std::move(piece));
        ++stats.phase2_rotations;
        continue;
      }
      const std::size_t s = path.length();
      if (w == path.start()) {
        if (s == n) break;
        continue;
      }
      if (detached.empty() && 2 * s >= n) {
        const std::size_t i = path.rank(w) - 1;
        if (2 * (s - i) >= n) {
          auto [front, back] = split_before(std::move(path), w);
          path = std::move(front);
          detached = std::move(back);
        }
      }
    }
    HamiltonCycle cycle{path.to_list()};
    if (const Verdict verdict = verify_hamilton_cycle(g, cycle); !verdict) {
      throw std::logic_error("baseline produced an invalid cycle: " + verdict.violation);
    }
    stats.success = true;
    result.cycle = std::move(cycle);
  } catch (const OracleError& e) {
    stats.failure_phase = "baseline";
    stats.failure_reason = e.what();
  }
  stats.oracle_calls_total = oracle.total_calls();
  stats.oracle_calls_max_per_vertex = oracle.max_calls_per_vertex();
  stats.phase1_calls = 0;
  stats.phase2_calls = stats.oracle_calls_total;
  stats.times.total_ms =
      std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  stats.times.phase2_ms = stats.times.total_ms;
  return result;
}

}  // namespace hamcycle
