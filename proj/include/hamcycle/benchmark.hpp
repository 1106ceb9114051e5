#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "hamcycle/baseline.hpp"
#include "hamcycle/cycle_join.hpp"
#include "hamcycle/graph.hpp"
#include "hamcycle/random.hpp"
#include "hamcycle/stats.hpp"
#include "hamcycle/verify.hpp"

namespace hamcycle {

enum class SolverKind { main, baseline };

inline const char* to_string(SolverKind s) { return s == SolverKind::main ? "main" : "baseline"; }

// p = min(1, C ln n / n).
inline double probability_for(std::size_t n, double C) {
  return std::min(1.0, C * std::log(static_cast<double>(n)) / static_cast<double>(n));
}

struct BenchmarkConfig {
  std::vector<std::size_t> grid;
  std::size_t seeds = 20;
  double C = 200.0;
  std::uint64_t base_seed = 1;
  bool run_main = true;
  std::size_t baseline_seeds = 0;  // baseline runs on the first k seeds per grid point
  SolverConfig solver;
  BaselineConfig baseline;
  unsigned threads = 1;
  // Called once per generated graph, on the worker thread that owns it.
  std::function<void(const StoredGraph&, std::size_t seed_index)> on_graph;
};

inline std::uint64_t bench_graph_seed(std::uint64_t base, std::size_t n, std::size_t i) {
  return derive_seed(derive_seed(base, n), i);
}

inline std::uint64_t bench_algo_seed(std::uint64_t graph_seed) { return derive_seed(graph_seed, 0xa160); }

struct RunRecord {
  SolverKind solver = SolverKind::main;
  std::size_t seed_index = 0;
  RunStats stats;
};

struct GridAggregate {
  SolverKind solver = SolverKind::main;
  std::size_t n = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  // Means are over successful runs.
  double mean_calls = 0.0;
  std::uint64_t max_calls = 0;
  double mean_calls_per_n = 0.0;
  std::uint64_t max_per_vertex = 0;
  double mean_phase1_calls = 0.0;
  double mean_rotations = 0.0;
  double mean_cycles = 0.0;
  double mean_total_ms = 0.0;
};

struct SlopeFit {
  std::size_t points = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;  // 95% two-sided; infinite with only two points
  double ci_high = 0.0;
};

struct ScalingReport {
  std::vector<std::size_t> grid;
  std::size_t seeds = 0;
  double C = 0.0;
  std::uint64_t base_seed = 0;
  std::vector<RunRecord> runs;  // ordered by (n, seed, solver), independent of threads
  std::vector<GridAggregate> aggregates;
  std::optional<SlopeFit> main_fit;
  std::optional<SlopeFit> baseline_fit;
  bool fit_requirements_met = false;  // >= 4 grid points, >= 20 seeds each
};

// OLS of ln y on ln x.
inline SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  SlopeFit fit;
  fit.points = xy.size();
  if (xy.size() < 2) throw std::invalid_argument("fit_loglog: need at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += std::log(x);
    my += std::log(y);
  }
  const double k = static_cast<double>(xy.size());
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (std::log(x) - mx) * (std::log(x) - mx);
    sxy += (std::log(x) - mx) * (std::log(y) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog: x values must differ");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (xy.size() == 2) {
    fit.ci_low = -std::numeric_limits<double>::infinity();
    fit.ci_high = std::numeric_limits<double>::infinity();
    return fit;
  }
  double rss = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
    rss += r * r;
  }
  const double df = k - 2.0;
  fit.std_error = std::sqrt(rss / df / sxx);
  const boost::math::students_t dist(df);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.ci_low = fit.slope - t * fit.std_error;
  fit.ci_high = fit.slope + t * fit.std_error;
  return fit;
}

inline std::vector<GridAggregate> aggregate_runs(const std::vector<RunRecord>& runs) {
  std::vector<GridAggregate> out;
  for (SolverKind kind : {SolverKind::main, SolverKind::baseline}) {
    std::vector<std::size_t> ns;
    for (const auto& r : runs) {
      if (r.solver == kind) ns.push_back(r.stats.n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (std::size_t n : ns) {
      GridAggregate a;
      a.solver = kind;
      a.n = n;
      std::size_t ok = 0;
      for (const auto& r : runs) {
        if (r.solver != kind || r.stats.n != n) continue;
        ++a.runs;
        const RunStats& s = r.stats;
        a.max_per_vertex = std::max(a.max_per_vertex, s.oracle_calls_max_per_vertex);
        if (!s.success) {
          ++a.failures;
          continue;
        }
        ++ok;
        a.mean_calls += static_cast<double>(s.oracle_calls_total);
        a.max_calls = std::max(a.max_calls, s.oracle_calls_total);
        a.mean_phase1_calls += static_cast<double>(s.phase1_calls);
        a.mean_rotations += static_cast<double>(s.phase2_rotations);
        a.mean_cycles += static_cast<double>(s.cycles_in_cover);
        a.mean_total_ms += s.times.total_ms;
      }
      if (ok > 0) {
        const double k = static_cast<double>(ok);
        a.mean_calls /= k;
        a.mean_phase1_calls /= k;
        a.mean_rotations /= k;
        a.mean_cycles /= k;
        a.mean_total_ms /= k;
        a.mean_calls_per_n = a.mean_calls / static_cast<double>(n);
      }
      out.push_back(a);
    }
  }
  return out;
}

inline std::optional<SlopeFit> fit_for(const std::vector<GridAggregate>& aggregates, SolverKind kind) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& a : aggregates) {
    if (a.solver == kind && a.mean_calls > 0.0) xy.emplace_back(static_cast<double>(a.n), a.mean_calls);
  }
  if (xy.size() < 2) return std::nullopt;
  return fit_loglog(xy);
}

// Runs every (n, seed) task, in parallel when threads > 1. Graph generation
// is not timed. Failures are recorded, never fatal; an invalid cycle is.
inline ScalingReport scaling_benchmark(const BenchmarkConfig& config) {
  struct Task {
    std::size_t n, seed_index;
  };
  std::vector<Task> tasks;
  for (std::size_t n : config.grid) {
    for (std::size_t i = 0; i < config.seeds; ++i) tasks.push_back({n, i});
  }
  std::vector<std::vector<RunRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t t; !failed && (t = next.fetch_add(1)) < tasks.size();) {
      try {
        const auto [n, i] = tasks[t];
        const std::uint64_t graph_seed = bench_graph_seed(config.base_seed, n, i);
        const std::uint64_t algo_seed = bench_algo_seed(graph_seed);
        const StoredGraph g = generate_graph(n, probability_for(n, config.C), graph_seed);
        if (config.run_main) {
          slots[t].push_back({SolverKind::main, i, find_hamilton_cycle(g, algo_seed, config.solver).stats});
        }
        if (i < config.baseline_seeds) {
          slots[t].push_back(
              {SolverKind::baseline, i, baseline_angluin_valiant(g, algo_seed, config.baseline).stats});
        }
        if (config.on_graph) config.on_graph(g, i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  ScalingReport report;
  report.grid = config.grid;
  report.seeds = config.seeds;
  report.C = config.C;
  report.base_seed = config.base_seed;
  for (auto& slot : slots) {
    for (auto& r : slot) report.runs.push_back(std::move(r));
  }
  report.aggregates = aggregate_runs(report.runs);
  report.main_fit = fit_for(report.aggregates, SolverKind::main);
  report.baseline_fit = fit_for(report.aggregates, SolverKind::baseline);
  std::vector<std::size_t> distinct = config.grid;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  report.fit_requirements_met = distinct.size() >= 4 && config.seeds >= 20;
  return report;
}

// One record per run. Wall times are left out so reruns are byte-identical.
inline void write_ndjson(std::ostream& out, const ScalingReport& report) {
  for (const auto& r : report.runs) {
    nlohmann::json j = r.stats;
    j.erase("times_ms");
    j["solver"] = to_string(r.solver);
    j["seed_index"] = r.seed_index;
    out << j.dump() << '\n';
  }
}

inline nlohmann::json fit_json(const std::optional<SlopeFit>& fit) {
  if (!fit) return nullptr;
  auto finite_or_null = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"points", fit->points},
          {"slope", fit->slope},
          {"intercept", fit->intercept},
          {"std_error", fit->std_error},
          {"ci95", {finite_or_null(fit->ci_low), finite_or_null(fit->ci_high)}}};
}

inline nlohmann::json summary_json(const ScalingReport& report) {
  nlohmann::json aggregates = nlohmann::json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({{"solver", to_string(a.solver)},
                          {"n", a.n},
                          {"runs", a.runs},
                          {"failures", a.failures},
                          {"mean_calls", a.mean_calls},
                          {"max_calls", a.max_calls},
                          {"mean_calls_per_n", a.mean_calls_per_n},
                          {"max_per_vertex", a.max_per_vertex},
                          {"mean_phase1_calls", a.mean_phase1_calls},
                          {"mean_rotations", a.mean_rotations},
                          {"mean_cycles", a.mean_cycles},
                          {"mean_total_ms", a.mean_total_ms}});
  }
  return {{"schema", 1},
          {"grid", report.grid},
          {"seeds", report.seeds},
          {"C", report.C},
          {"base_seed", report.base_seed},
          {"runs", report.runs.size()},
          {"aggregates", aggregates},
          {"slope", fit_json(report.main_fit)},
          {"baseline_slope", fit_json(report.baseline_fit)},
          {"fit_requirements_met", report.fit_requirements_met}};
}

inline void write_csv(std::ostream& out, const ScalingReport& report) {
  out << "solver,n,runs,failures,mean_calls,max_calls,mean_calls_per_n,max_per_vertex,"
         "mean_phase1_calls,mean_rotations,mean_cycles,mean_total_ms\n";
  for (const auto& a : report.aggregates) {
    out << to_string(a.solver) << ',' << a.n << ',' << a.runs << ',' << a.failures << ',' << a.mean_calls
        << ',' << a.max_calls << ',' << a.mean_calls_per_n << ',' << a.max_per_vertex << ','
        << a.mean_phase1_calls << ',' << a.mean_rotations << ',' << a.mean_cycles << ','
        << a.mean_total_ms << '\n';
  }
}

}  // namespace hamcycle
