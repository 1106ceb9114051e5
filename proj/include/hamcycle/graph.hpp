#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hamcycle/core.hpp"
#include "hamcycle/random.hpp"

namespace hamcycle {

using Edge = std::pair<Vertex, Vertex>;

// An immutable G(n,p) instance. Two CSR copies of the adjacency structure are
// kept: the ascending one answers edge membership, the shuffled one is what
// the neighbor oracle scans. The shuffle is a pure function of the ascending
// lists and graph_seed, so a graph rebuilt from its edge list is bit-identical.
class StoredGraph {
 public:
  // Throws std::invalid_argument for n < 2, p outside [0,1], self-loops,
  // duplicate or out-of-range edges.
  static StoredGraph from_edges(std::size_t n, double p, std::uint64_t graph_seed,
                                std::span<const Edge> edges) {
    validate(n, p);
    std::vector<std::uint64_t> offsets(n + 1, 0);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
      ++offsets[u + 1];
      ++offsets[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    std::vector<Vertex> targets(offsets[n]);
    std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
      targets[fill[u]++] = v;
      targets[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto first = targets.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
      auto last = targets.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last) {
        throw std::invalid_argument("duplicate edge at vertex " + std::to_string(v));
      }
    }
    return StoredGraph(n, p, graph_seed, std::move(offsets), std::move(targets));
  }

  std::size_t vertex_count() const noexcept { return n_; }
  double edge_probability() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t edge_count() const noexcept { return sorted_.size() / 2; }

  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  // Neighbors of v in the stored (uniformly shuffled) order.
  std::span<const Vertex> adjacency(Vertex v) const {
    return {adjacency_.data() + offsets_[v], degree(v)};
  }

  std::span<const Vertex> sorted_neighbors(Vertex v) const {
    return {sorted_.data() + offsets_[v], degree(v)};
  }

  bool has_edge(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_ || u == v) return false;
    if (degree(u) > degree(v)) std::swap(u, v);
    const auto row = sorted_neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  // Calls f(u, v) for every edge with u < v, in ascending lexicographic order.
  template <class F>
  void for_each_edge(F&& f) const {
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v : sorted_neighbors(u)) {
        if (v > u) f(u, v);
      }
    }
  }

 private:
  friend StoredGraph generate_graph(std::size_t n, double p, std::uint64_t graph_seed);

  static void validate(std::size_t n, double p) {
    if (n < 2) throw std::invalid_argument("graph needs n >= 2");
    if (n >= kNoVertex) throw std::invalid_argument("n too large for 32-bit vertex ids");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability outside [0,1]");
  }

  StoredGraph(std::size_t n, double p, std::uint64_t seed, std::vector<std::uint64_t> offsets,
              std::vector<Vertex> sorted)
      : n_(n), p_(p), seed_(seed), offsets_(std::move(offsets)), sorted_(std::move(sorted)) {
    adjacency_ = sorted_;
    Rng rng(derive_seed(seed_, 2));
    for (std::size_t v = 0; v < n_; ++v) {
      Vertex* row = adjacency_.data() + offsets_[v];
      for (std::size_t i = degree(static_cast<Vertex>(v)); i > 1; --i) {
        std::swap(row[i - 1], row[rng.below(i)]);
      }
    }
  }

  std::size_t n_;
  double p_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> sorted_;
  std::vector<Vertex> adjacency_;
};

// G(n,p) by geometric skipping over the pairs (v, w), w < v, in row order, so
// the cost is O(n + m). Two passes over the same random stream (count, then
// fill) leave every adjacency row ascending without a sort.
inline StoredGraph generate_graph(std::size_t n, double p, std::uint64_t graph_seed) {
  StoredGraph::validate(n, p);

  auto enumerate = [&](auto&& emit) {
    if (p <= 0.0) return;
    if (p >= 1.0) {
      for (Vertex v = 1; v < n; ++v)
        for (Vertex w = 0; w < v; ++w) emit(v, w);
      return;
    }
    Rng rng(derive_seed(graph_seed, 1));
    const double log_q = std::log1p(-p);
    const auto limit = static_cast<double>(n) * static_cast<double>(n);
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
      const double skip = std::floor(std::log1p(-rng.unit()) / log_q);
      w += 1 + static_cast<std::int64_t>(std::min(skip, limit));
      while (w >= v && v < nn) {
        w -= v;
        ++v;
      }
      if (v < nn) emit(static_cast<Vertex>(v), static_cast<Vertex>(w));
    }
  };

  std::vector<std::uint64_t> offsets(n + 1, 0);
  enumerate([&](Vertex v, Vertex w) {
    ++offsets[v + 1];
    ++offsets[w + 1];
  });
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<Vertex> sorted(offsets[n]);
  std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);
  enumerate([&](Vertex v, Vertex w) {
    sorted[fill[v]++] = w;
    sorted[fill[w]++] = v;
  });
  return StoredGraph(n, p, graph_seed, std::move(offsets), std::move(sorted));
}

// Text format: "n p graph_seed" on line 1, then one "u v" line per edge with
// u < v in ascending lexicographic order. Adjacency order is not stored.
inline void write_graph(std::ostream& out, const StoredGraph& g) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, g.edge_probability());
  out << g.vertex_count() << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
      << ' ' << g.seed() << '\n';
  std::string line;
  g.for_each_edge([&](Vertex u, Vertex v) {
    line.clear();
    line += std::to_string(u);
    line += ' ';
    line += std::to_string(v);
    line += '\n';
    out << line;
  });
}

inline StoredGraph read_graph(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("graph file: missing header");
  std::istringstream hs(header);
  std::size_t n = 0;
  std::string p_text;
  std::uint64_t seed = 0;
  if (!(hs >> n >> p_text >> seed)) throw std::runtime_error("graph file: bad header");
  double p = 0.0;
  const auto res = std::from_chars(p_text.data(), p_text.data() + p_text.size(), p);
  if (res.ec != std::errc()) throw std::runtime_error("graph file: bad probability");

  std::vector<Edge> edges;
  std::uint64_t u = 0;
  std::uint64_t v = 0;
  Edge last{0, 0};
  while (in >> u >> v) {
    if (u >= v || v >= n) throw std::runtime_error("graph file: edge must satisfy u < v < n");
    const Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (!edges.empty() && !(last < e)) throw std::runtime_error("graph file: edges not ascending");
    edges.push_back(e);
    last = e;
  }
  if (!in.eof()) throw std::runtime_error("graph file: malformed edge line");
  return StoredGraph::from_edges(n, p, seed, edges);
}

}  // namespace hamcycle
