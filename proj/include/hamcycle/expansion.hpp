#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hamcycle/core.hpp"
#include "hamcycle/graph.hpp"
#include "hamcycle/matching.hpp"
#include "hamcycle/oracle.hpp"
#include "hamcycle/random.hpp"

namespace hamcycle {

struct ExpansionReport {
  std::size_t samples_requested = 0;
  std::size_t samples_checked = 0;
  std::size_t violations = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::size_t min_ratio_size = 0;
  double full_set_ratio = 0.0;  // |A'| = |A|; informational only
  bool partial = false;         // stopped early on an oracle error
  std::string note;

  bool passed() const noexcept { return !partial && violations == 0; }
};

// Samples subsets A' of A (log-uniform size, then a uniform subset of that
// size) and checks |N_d(A')| >= |A'| d / 100 with d = d_schedule(n, |A'|),
// where N_d(a) is the first ceil(d) bipartite answers of a. Those answers are
// fixed per vertex, so each vertex is exposed at most ceil(ln n) times no
// matter how many subsets contain it.
inline ExpansionReport check_expansion(const StoredGraph& g, std::uint64_t algo_seed,
                                       std::size_t samples,
                                       std::optional<QueryBudget> budget = std::nullopt) {
  const std::size_t n = g.vertex_count();
  const Bipartition part = Bipartition::balanced(n);
  NeighborOracle oracle(g, algo_seed, budget);
  Rng rng(derive_seed(algo_seed, 0xe59a));
  std::vector<std::vector<Vertex>> exposed(part.half);
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;

  ExpansionReport report;
  report.samples_requested = samples;

  auto ratio_of = [&](const std::vector<Vertex>& subset) {
    const double d = d_schedule(n, subset.size());
    const auto depth = static_cast<std::size_t>(std::ceil(d));
    ++epoch;
    std::size_t distinct = 0;
    for (Vertex a : subset) {
      auto& seq = exposed[a];
      while (seq.size() < depth) seq.push_back(oracle.bipartite_new_neighbor(a, Side::B, part));
      for (std::size_t i = 0; i < depth; ++i) {
        if (stamp[seq[i]] != epoch) {
          stamp[seq[i]] = epoch;
          ++distinct;
        }
      }
    }
    return static_cast<double>(distinct) / (static_cast<double>(subset.size()) * d);
  };

  std::vector<Vertex> pool(part.half);
  for (Vertex a = 0; a < part.half; ++a) pool[a] = a;
  try {
    for (std::size_t s = 0; s < samples; ++s) {
      const double log_size = rng.unit() * std::log(static_cast<double>(part.half) + 1.0);
      const std::size_t size =
          std::clamp<std::size_t>(static_cast<std::size_t>(std::exp(log_size)), 1, part.half);
      for (std::size_t i = 0; i < size; ++i) {
        std::swap(pool[i], pool[i + rng.below(part.half - i)]);
      }
      const std::vector<Vertex> subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
      const double ratio = ratio_of(subset);
      ++report.samples_checked;
      if (ratio < report.min_ratio) {
        report.min_ratio = ratio;
        report.min_ratio_size = size;
      }
      if (100.0 * ratio < 1.0) ++report.violations;
    }
    report.full_set_ratio = ratio_of(pool);
  } catch (const OracleError& e) {
    report.partial = true;
    report.note = e.what();
  }
  return report;
}

}  // namespace hamcycle
