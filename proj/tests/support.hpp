#pragma once

// Test oracles shared by the unit suites and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "hamcycle/graph.hpp"
#include "hamcycle/path_seq.hpp"
#include "hamcycle/random.hpp"

namespace hamcycle::ref {

struct ChiSquare {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Pearson goodness of fit of `observed` counts against cell probabilities.
inline ChiSquare chi_square(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs) {
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  ChiSquare r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * probs[i];
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
  }
  r.df = static_cast<double>(observed.size() - 1);
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.df), r.statistic));
  return r;
}

inline StoredGraph complete_graph(std::size_t n, std::uint64_t seed) { return generate_graph(n, 1.0, seed); }

// K_{m,m} on A = [0, m), B = [m, 2m).
inline StoredGraph complete_bipartite(std::size_t m, std::uint64_t seed) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < m; ++a)
    for (Vertex b = static_cast<Vertex>(m); b < 2 * m; ++b) edges.emplace_back(a, b);
  return StoredGraph::from_edges(2 * m, 1.0, seed, edges);
}

// Exact law of the first two new_neighbor(0) answers on K_n (p = 1), given
// that both calls return. Independent of the oracle code: enumerates every
// list order and every out/not-out pattern (each edge points away from 0 with
// probability 1/2), then the resampling coin of the second call.
inline std::map<std::pair<int, int>, double> two_call_law(int n) {
  std::vector<int> order(static_cast<std::size_t>(n - 1));
  std::iota(order.begin(), order.end(), 1);
  std::map<std::pair<int, int>, double> law;
  double mass = 0.0;
  double perms = 0.0;
  do {
    perms += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  do {
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
      const double w = std::pow(0.5, n - 1) / perms;
      std::vector<int> outs;
      for (int x : order) {
        if (mask & (1u << (x - 1))) outs.push_back(x);
      }
      if (outs.empty()) continue;
      const double resample = 1.0 / (n - 1);
      law[{outs[0], outs[0]}] += w * resample;
      mass += w * resample;
      if (outs.size() >= 2) {
        law[{outs[0], outs[1]}] += w * (1.0 - resample);
        mass += w * (1.0 - resample);
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& [cell, p] : law) p /= mass;
  return law;
}

// Exact mean and variance of the number of occupied cells after k uniform
// throws into m cells.
inline std::pair<double, double> occupancy_moments(double m, double k) {
  const double q1 = std::pow(1.0 - 1.0 / m, k);
  const double q2 = std::pow(1.0 - 2.0 / m, k);
  const double mean = m * (1.0 - q1);
  const double var = m * q1 + m * (m - 1.0) * q2 - m * m * q1 * q1;
  return {mean, var};
}

struct FuzzResult {
  std::uint64_t ops = 0;
  std::uint64_t mutations = 0;
  std::uint64_t invariant_checks = 0;
  std::string mismatch;  // empty when every answer agreed
};

// Random from_sequence / split_before / concat / release / query operations
// on PathSeq, mirrored on plain vectors. Stops at the first disagreement.
inline FuzzResult fuzz_path_seq(std::uint64_t seed, std::uint64_t ops, std::size_t universe) {
  Rng rng(seed);
  PathForest forest(universe);
  std::vector<PathSeq> real;
  std::vector<std::vector<Vertex>> model;
  std::vector<Vertex> free_pool(universe);
  std::iota(free_pool.begin(), free_pool.end(), Vertex{0});
  FuzzResult res;

  auto fail = [&](const std::string& what) {
    std::ostringstream s;
    s << "op " << res.ops << ": " << what;
    res.mismatch = s.str();
  };
  auto checked = [&](std::size_t i) {
    real[i].check_invariants();
    ++res.invariant_checks;
    if (real[i].to_list() != model[i]) {
      fail("sequence differs from model");
      return false;
    }
    return true;
  };
  auto take_free = [&] {
    const std::size_t i = rng.below(free_pool.size());
    std::swap(free_pool[i], free_pool.back());
    const Vertex v = free_pool.back();
    free_pool.pop_back();
    return v;
  };
  auto erase_at = [&](std::size_t i) {
    real.erase(real.begin() + static_cast<std::ptrdiff_t>(i));
    model.erase(model.begin() + static_cast<std::ptrdiff_t>(i));
  };

  try {
    for (; res.ops < ops; ++res.ops) {
      const std::uint64_t kind = rng.below(100);
      if (real.empty() || (kind < 12 && !free_pool.empty())) {
        if (free_pool.empty()) continue;
        const std::size_t len = 1 + rng.below(std::min<std::size_t>(free_pool.size(), 16));
        std::vector<Vertex> seq;
        for (std::size_t j = 0; j < len; ++j) seq.push_back(take_free());
        real.push_back(forest.from_sequence(seq));
        model.push_back(seq);
        ++res.mutations;
        if (!checked(real.size() - 1)) return res;
      } else if (kind < 30) {
        const std::size_t i = rng.below(real.size());
        if (model[i].size() < 2) continue;
        const std::size_t cut = 1 + rng.below(model[i].size() - 1);
        auto [left, right] = split_before(std::move(real[i]), model[i][cut]);
        std::vector<Vertex> tail(model[i].begin() + static_cast<std::ptrdiff_t>(cut), model[i].end());
        model[i].resize(cut);
        real[i] = std::move(left);
        real.push_back(std::move(right));
        model.push_back(std::move(tail));
        ++res.mutations;
        if (!checked(i) || !checked(real.size() - 1)) return res;
      } else if (kind < 48) {
        if (real.size() < 2) continue;
        const std::size_t i = rng.below(real.size());
        std::size_t j = rng.below(real.size() - 1);
        if (j >= i) ++j;
        real[i] = concat(std::move(real[i]), std::move(real[j]));
        model[i].insert(model[i].end(), model[j].begin(), model[j].end());
        const std::size_t expect = model[i].size();
        const std::size_t keep = i > j ? i - 1 : i;
        erase_at(j);
        ++res.mutations;
        if (real[keep].length() != expect) {
          fail("concat length");
          return res;
        }
        if (!checked(keep)) return res;
      } else if (kind < 51) {
        const std::size_t i = rng.below(real.size());
        for (Vertex v : model[i]) free_pool.push_back(v);
        erase_at(i);
        ++res.mutations;
      } else {
        const std::size_t i = rng.below(real.size());
        const auto& m = model[i];
        const PathSeq& p = real[i];
        const std::size_t r = rng.below(m.size());
        const Vertex v = m[r];
        const std::optional<Vertex> pred = r == 0 ? std::nullopt : std::optional<Vertex>(m[r - 1]);
        const std::optional<Vertex> succ =
            r + 1 == m.size() ? std::nullopt : std::optional<Vertex>(m[r + 1]);
        const bool half = 2 * (r + 1) <= m.size() + 1;
        const Vertex probe = static_cast<Vertex>(rng.below(universe));
        const bool member = std::find(m.begin(), m.end(), probe) != m.end();
        if (p.pred(v) != pred) return fail("pred"), res;
        if (p.succ(v) != succ) return fail("succ"), res;
        if (p.rank(v) != r + 1) return fail("rank"), res;
        if (p.half(v) != half) return fail("half"), res;
        if (p.contains(probe) != member) return fail("contains"), res;
        if (p.start() != m.front() || p.end() != m.back()) return fail("endpoints"), res;
        if (p.length() != m.size()) return fail("length"), res;
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("exception: ") + e.what());
  }
  return res;
}

}  // namespace hamcycle::ref
