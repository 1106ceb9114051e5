#pragma once

// Phase 2: stitch the cycle cover M1 ∪ M2 into one Hamilton cycle.
//
//  1. greedy_absorb     grow a path from the first cycle until |P| > 3n/4 by
//                       appending whole cycles hit from the path's end.
//  2. add_single_cycle  splice each remaining cycle in, using long Posa
//                       rotations (pivot in the first half, re-entry in the
//                       second half) to move the endpoint.
//  3. close_cycle       the same loop with p_start as the cycle to join.
//
// A vertex is sampled (k oracle calls) at most once in this phase; the used
// set U records every sampled vertex.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "hamcycle/core.hpp"
#include "hamcycle/graph.hpp"
#include "hamcycle/matching.hpp"
#include "hamcycle/oracle.hpp"
#include "hamcycle/path_seq.hpp"
#include "hamcycle/stats.hpp"
#include "hamcycle/verify.hpp"

namespace hamcycle {

struct CycleCover {
  std::vector<std::vector<Vertex>> cycles;
  std::vector<std::uint32_t> cycle_of;  // vertex -> cycle index
  std::vector<std::uint32_t> position;  // vertex -> index within its cycle

  std::size_t vertex_count() const noexcept { return cycle_of.size(); }
};

// Alternates M1 and M2 edges from each A-vertex in ascending order, giving
// cycles (a1, M1(a1), a2, M1(a2), ...) with a_{i+1} = M2(M1(a_i)). A doubled
// edge is a 2-cycle; the set-aside vertex, if any, is a trailing 1-cycle.
inline CycleCover cycle_cover(const Matching& m1, const Matching& m2, const Bipartition& part) {
  if (!m1.perfect_on(part) || !m2.perfect_on(part)) {
    throw std::invalid_argument("cycle_cover: matchings must be perfect on the bipartition");
  }
  const std::size_t n = m1.vertex_count();
  CycleCover cover;
  cover.cycle_of.assign(n, kNoVertex);
  cover.position.assign(n, kNoVertex);
  for (Vertex start = 0; start < part.half; ++start) {
    if (cover.cycle_of[start] != kNoVertex) continue;
    const auto index = static_cast<std::uint32_t>(cover.cycles.size());
    std::vector<Vertex> cycle;
    Vertex a = start;
    do {
      const Vertex b = m1.partner(a);
      for (Vertex x : {a, b}) {
        cover.cycle_of[x] = index;
        cover.position[x] = static_cast<std::uint32_t>(cycle.size());
        cycle.push_back(x);
      }
      a = m2.partner(b);
    } while (a != start);
    cover.cycles.push_back(std::move(cycle));
  }
  if (part.set_aside) {
    const Vertex s = *part.set_aside;
    cover.cycle_of[s] = static_cast<std::uint32_t>(cover.cycles.size());
    cover.position[s] = 0;
    cover.cycles.push_back({s});
  }
  return cover;
}

// Distinct answers of k new_neighbor(v) calls, in first-seen order.
inline std::vector<Vertex> sample_neighbors(NeighborOracle& oracle, Vertex v, std::size_t k) {
  std::vector<Vertex> out;
  std::unordered_set<Vertex> seen;
  out.reserve(k);
  seen.reserve(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex w = oracle.new_neighbor(v);
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

inline std::size_t default_sample_size(std::size_t n, double factor = 40.0) {
  return static_cast<std::size_t>(std::ceil(factor * std::log(static_cast<double>(n))));
}

class UsedSet {
 public:
  explicit UsedSet(std::size_t n = 0) : flags_(n, 0) {}
  bool contains(Vertex v) const { return flags_[v] != 0; }
  void insert(Vertex v) {
    if (!flags_[v]) {
      flags_[v] = 1;
      ++count_;
    }
  }
  std::size_t size() const noexcept { return count_; }

 private:
  std::vector<char> flags_;
  std::size_t count_ = 0;
};

// Mutable Phase 2 state: the growing path, its O(1) membership flags, U, and
// counters.
struct JoinState {
  JoinState(NeighborOracle& o, std::size_t k, bool check)
      : oracle(&o),
        forest(o.vertex_count()),
        in_path(o.vertex_count(), 0),
        used(o.vertex_count()),
        mark(o.vertex_count(), 0),
        sample_size(k),
        audit(check) {}

  NeighborOracle* oracle;
  PathForest forest;
  PathSeq path;
  std::vector<char> in_path;
  UsedSet used;
  std::vector<char> mark;  // scratch membership for N_start
  std::size_t sample_size;
  bool audit;
  std::uint64_t rotations = 0;
  std::uint64_t joins = 0;
  std::uint64_t greedy_absorptions = 0;

  std::size_t n() const noexcept { return in_path.size(); }

  // Samples v and records it in U. Sampling a vertex twice is a logic error.
  std::vector<Vertex> sample(Vertex v) {
    if (used.contains(v)) throw std::logic_error("vertex " + std::to_string(v) + " sampled twice");
    used.insert(v);
    return sample_neighbors(*oracle, v, sample_size);
  }

  void append(std::span<const Vertex> seq) {
    for (Vertex x : seq) in_path[x] = 1;
    path = concat(std::move(path), forest.from_sequence(seq));
  }

  void require_edge(Vertex u, Vertex v) const {
    if (audit && !oracle->graph().has_edge(u, v)) {
      throw std::logic_error("path uses non-edge {" + std::to_string(u) + "," +
                             std::to_string(v) + "}");
    }
  }

  void audit_path() const {
    if (!audit) return;
    path.check_invariants();
    const auto order = path.to_list();
    for (std::size_t i = 0; i + 1 < order.size(); ++i) require_edge(order[i], order[i + 1]);
  }
};

// Returns the indices of cycles not absorbed, in cover order. Throws
// SearchFailure when a sample of p_end holds no vertex outside the path.
inline std::vector<std::size_t> greedy_absorb(JoinState& st, const CycleCover& cover) {
  const std::size_t n = st.n();
  std::vector<char> consumed(cover.cycles.size(), 0);
  st.path = PathSeq();
  st.append(cover.cycles.front());
  consumed[0] = 1;

  std::vector<Vertex> traversal;
  while (4 * st.path.length() <= 3 * n) {
    const Vertex end = st.path.end();
    const auto nbrs = st.sample(end);
    Vertex v = kNoVertex;
    for (Vertex w : nbrs) {
      if (!st.in_path[w]) {
        v = w;
        break;
      }
    }
    if (v == kNoVertex) {
      throw SearchFailure("greedy give-up: no sampled neighbor of " + std::to_string(end) +
                          " outside the path");
    }
    const std::uint32_t ci = cover.cycle_of[v];
    const auto& cycle = cover.cycles[ci];
    const std::size_t at = cover.position[v];
    traversal.clear();
    for (std::size_t i = 0; i < cycle.size(); ++i) traversal.push_back(cycle[(at + i) % cycle.size()]);
    st.require_edge(end, v);
    st.append(traversal);
    consumed[ci] = 1;
    ++st.greedy_absorptions;
  }
  st.audit_path();

  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < cover.cycles.size(); ++i) {
    if (!consumed[i]) remaining.push_back(i);
  }
  return remaining;
}

namespace detail {

// Rebuilds P as (p_start..pred(v)) + [middle] + (q..p_end) + (v..pred(q)).
inline void splice(JoinState& st, Vertex v, Vertex q, std::span<const Vertex> middle) {
  auto [head, rest] = split_before(std::move(st.path), v);
  auto [pivot_run, tail] = split_before(std::move(rest), q);
  PathSeq joined = std::move(head);
  if (!middle.empty()) {
    for (Vertex x : middle) st.in_path[x] = 1;
    joined = concat(std::move(joined), st.forest.from_sequence(middle));
  }
  joined = concat(std::move(joined), std::move(tail));
  st.path = concat(std::move(joined), std::move(pivot_run));
}

// First q in `candidates` on the path's second half whose predecessor is unused.
inline Vertex find_reentry(const JoinState& st, std::span<const Vertex> candidates) {
  for (Vertex q : candidates) {
    if (!st.in_path[q]) continue;
    const auto before = st.path.pred(q);
    if (!before || st.used.contains(*before)) continue;
    if (!st.path.half(q)) return q;
  }
  return kNoVertex;
}

// Long Posa rotation driven by the sample of p_end; moves the endpoint to an
// unused vertex.
inline void rotate(JoinState& st, std::span<const Vertex> end_sample) {
  const Vertex start = st.path.start();
  Vertex v = kNoVertex;
  for (Vertex w : end_sample) {
    if (!st.in_path[w] || w == start) continue;
    if (st.used.contains(*st.path.pred(w))) continue;
    if (st.path.half(w)) {
      v = w;
      break;
    }
  }
  if (v == kNoVertex) throw SearchFailure("rotation: no first-half pivot with unused predecessor");
  const Vertex before = *st.path.pred(v);
  const auto pivot_sample = st.sample(before);
  const Vertex q = find_reentry(st, pivot_sample);
  if (q == kNoVertex) throw SearchFailure("rotation: no second-half re-entry vertex");
  const Vertex end = st.path.end();
  st.require_edge(before, q);
  st.require_edge(end, v);
  splice(st, v, q, {});
  ++st.rotations;
  st.audit_path();
}

}  // namespace detail

// Splices `cycle` (cut at cycle.front(), kept in stored orientation) into the
// path. Requires |P| >= 3n/4 and the cycle disjoint from P. Throws
// SearchFailure when a search comes up empty.
inline void add_single_cycle(JoinState& st, std::span<const Vertex> cycle) {
  const Vertex c_start = cycle.front();
  const Vertex c_end = cycle.back();
  const auto start_sample = st.sample(c_start);
  const auto end_sample = c_end == c_start ? start_sample : st.sample(c_end);

  std::vector<Vertex> n_start;
  for (Vertex w : start_sample) {
    if (st.in_path[w]) {
      n_start.push_back(w);
      st.mark[w] = 1;
    }
  }
  struct Unmark {
    JoinState& st;
    const std::vector<Vertex>& marked;
    ~Unmark() {
      for (Vertex w : marked) st.mark[w] = 0;
    }
  } unmark{st, n_start};

  for (;;) {
    const Vertex end = st.path.end();
    const auto nbrs = st.sample(end);
    Vertex v = kNoVertex;
    for (Vertex w : nbrs) {
      if (!st.in_path[w]) continue;
      const auto before = st.path.pred(w);
      if (before && st.mark[*before] && st.path.half(w)) {
        v = w;
        break;
      }
    }
    if (v != kNoVertex) {
      const Vertex q = detail::find_reentry(st, end_sample);
      if (q == kNoVertex) throw SearchFailure("join: no second-half vertex in the sample of c_end");
      st.require_edge(*st.path.pred(v), c_start);
      st.require_edge(c_end, q);
      st.require_edge(end, v);
      detail::splice(st, v, q, cycle);
      ++st.joins;
      st.audit_path();
      return;
    }
    detail::rotate(st, nbrs);
  }
}

// Turns the Hamilton path into a Hamilton cycle: find v in the sample of
// p_end whose successor is in the sample of p_start, then emit
// (p_start..v) + (p_end..succ(v)).
inline HamiltonCycle close_cycle(JoinState& st) {
  if (st.path.length() != st.n()) throw std::logic_error("close_cycle: path is not Hamiltonian");
  const Vertex start = st.path.start();
  if (st.used.contains(start)) throw SearchFailure("close: p_start was already sampled");
  const auto start_sample = st.sample(start);
  std::vector<Vertex> n_start;
  for (Vertex w : start_sample) {
    if (st.in_path[w]) {
      n_start.push_back(w);
      st.mark[w] = 1;
    }
  }
  struct Unmark {
    JoinState& st;
    const std::vector<Vertex>& marked;
    ~Unmark() {
      for (Vertex w : marked) st.mark[w] = 0;
    }
  } unmark{st, n_start};

  for (;;) {
    const Vertex end = st.path.end();
    const auto nbrs = st.sample(end);
    for (Vertex v : nbrs) {
      if (!st.in_path[v]) continue;
      const auto after = st.path.succ(v);
      if (after && st.mark[*after] && st.path.half(v)) {
        st.require_edge(end, v);
        st.require_edge(*after, start);
        auto [front, back] = split_before(std::move(st.path), *after);
        HamiltonCycle out{front.to_list()};
        const auto reversed = back.to_list_reversed();
        out.order.insert(out.order.end(), reversed.begin(), reversed.end());
        return out;
      }
    }
    detail::rotate(st, nbrs);
  }
}

struct SolverConfig {
  std::optional<QueryBudget> budget;  // defaults to QueryBudget::defaults(n)
  double sample_factor = 40.0;        // k = ceil(sample_factor * ln n)
  bool audit = false;                 // per-step edge and structure checks
};

struct SolveResult {
  std::optional<HamiltonCycle> cycle;
  RunStats stats;
};

// Two matchings (with an exposure reset between), the cycle cover, then the
// three stitching stages. A failure is a terminal result naming its phase.
inline SolveResult find_hamilton_cycle(const StoredGraph& g, std::uint64_t algo_seed,
                                       const SolverConfig& config = {}) {
  using clock = std::chrono::steady_clock;
  const std::size_t n = g.vertex_count();
  if (n < 4) throw std::invalid_argument("find_hamilton_cycle: n must be at least 4");

  SolveResult result;
  RunStats& stats = result.stats;
  stats.n = n;
  stats.p = g.edge_probability();
  stats.graph_seed = g.seed();
  stats.algo_seed = algo_seed;

  NeighborOracle oracle(g, algo_seed, config.budget, config.audit);
  const Bipartition part = Bipartition::balanced(n);
  JoinState st(oracle, default_sample_size(n, config.sample_factor), config.audit);
  std::string phase = "phase1-failure";

  const auto t0 = clock::now();
  auto t1 = t0;
  auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  auto finish = [&] {
    const auto t2 = clock::now();
    stats.oracle_calls_total = oracle.total_calls();
    stats.oracle_calls_max_per_vertex = oracle.max_calls_per_vertex();
    stats.phase2_rotations = st.rotations;
    stats.phase2_joins = st.joins;
    stats.greedy_absorptions = st.greedy_absorptions;
    stats.used_set_peak = st.used.size();
    stats.times.total_ms = ms(t2 - t0);
    if (phase == "phase1-failure") {
      stats.phase1_calls = stats.oracle_calls_total;
      stats.times.phase1_ms = stats.times.total_ms;
    } else {
      stats.phase2_calls = stats.oracle_calls_total - stats.phase1_calls;
      stats.times.phase1_ms = ms(t1 - t0);
      stats.times.phase2_ms = ms(t2 - t1);
    }
  };

  try {
    MatchingStats first;
    MatchingStats second;
    const Matching m1 = fast_perfect_matching(oracle, part, &first);
    reset_exposure(oracle);
    const Matching m2 = fast_perfect_matching(oracle, part, &second);
    stats.exposed_edges = {first.exposed_edges, second.exposed_edges};
    stats.phase1_calls = oracle.total_calls();
    t1 = clock::now();

    const CycleCover cover = cycle_cover(m1, m2, part);
    stats.cycles_in_cover = cover.cycles.size();

    phase = "phase2-greedy";
    const auto remaining = greedy_absorb(st, cover);
    phase = "phase2-add-cycle";
    for (std::size_t ci : remaining) add_single_cycle(st, cover.cycles[ci]);
    phase = "phase2-close";
    HamiltonCycle cycle = close_cycle(st);
    finish();

    if (const Verdict verdict = verify_hamilton_cycle(g, cycle); !verdict) {
      throw std::logic_error("solver produced an invalid cycle: " + verdict.violation);
    }
    stats.success = true;
    result.cycle = std::move(cycle);
  } catch (const OracleError& e) {
    finish();
    stats.failure_phase = phase;
    stats.failure_reason = e.what();
  } catch (const SearchFailure& e) {
    finish();
    stats.failure_phase = phase;
    stats.failure_reason = e.what();
  }
  return result;
}

}  // namespace hamcycle
