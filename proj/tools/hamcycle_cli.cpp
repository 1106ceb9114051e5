#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamcycle/hamcycle.hpp"

using namespace hamcycle;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailure = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphArgs {
  std::string graph_file;
  std::size_t n = 0;
  std::optional<double> p;
  std::optional<double> C;
  std::uint64_t graph_seed = 1;
};

void add_graph_options(CLI::App& cmd, GraphArgs& g, bool allow_file) {
  if (allow_file) cmd.add_option("--graph", g.graph_file, "Read the graph from this file");
  cmd.add_option("--n", g.n, "Number of vertices")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 31));
  auto* p = cmd.add_option("--p", g.p, "Edge probability")->check(CLI::Range(0.0, 1.0));
  auto* c = cmd.add_option("--C", g.C, "Coefficient: p = min(1, C ln n / n)")->check(CLI::PositiveNumber);
  p->excludes(c);
  cmd.add_option("--graph-seed", g.graph_seed, "Seed of the graph generator");
}

double resolve_p(const GraphArgs& g) {
  if (g.p.has_value() == g.C.has_value()) throw UsageError("exactly one of --p and --C is required");
  if (g.p) return *g.p;
  const double raw = *g.C * std::log(static_cast<double>(g.n)) / static_cast<double>(g.n);
  if (raw > 1.0) {
    std::cerr << "warning: C ln n / n = " << raw << " exceeds 1; using p = 1\n";
    return 1.0;
  }
  return raw;
}

StoredGraph load_graph(const GraphArgs& g) {
  if (!g.graph_file.empty()) {
    if (g.p || g.C || g.n) throw UsageError("--graph cannot be combined with --n, --p or --C");
    std::ifstream in(g.graph_file);
    if (!in) throw std::runtime_error("cannot open " + g.graph_file);
    return read_graph(in);
  }
  if (g.n == 0) throw UsageError("either --graph or --n is required");
  return generate_graph(g.n, resolve_p(g), g.graph_seed);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  open_out(path) << j.dump(2) << '\n';
}

std::vector<Vertex> read_cycle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Vertex> order;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || v > kNoVertex) throw std::runtime_error("bad vertex id '" + token + "'");
    order.push_back(static_cast<Vertex>(v));
  }
  // Cycle files repeat the first vertex at the end.
  if (order.size() > 1 && order.front() == order.back()) order.pop_back();
  return order;
}

struct SolveArgs {
  GraphArgs graph;
  std::uint64_t algo_seed = 1;
  unsigned retries = 0;
  std::optional<std::uint64_t> per_vertex_cap;
  std::optional<std::uint64_t> total_cap;
  double sample_factor = 40.0;
  bool audit = false;
  bool baseline = false;
  std::string cycle_out;
  std::string stats_out;
};

int cmd_gen(const GraphArgs& args, const std::string& out_path) {
  if (args.n == 0) throw UsageError("--n is required");
  const StoredGraph g = generate_graph(args.n, resolve_p(args), args.graph_seed);
  if (out_path.empty()) {
    write_graph(std::cout, g);
  } else {
    auto out = open_out(out_path);
    write_graph(out, g);
  }
  std::cerr << "n=" << g.vertex_count() << " p=" << g.edge_probability() << " edges=" << g.edge_count() << '\n';
  return kOk;
}

int cmd_solve(const SolveArgs& args) {
  const StoredGraph g = load_graph(args.graph);
  const std::size_t n = g.vertex_count();
  SolverConfig config;
  config.sample_factor = args.sample_factor;
  config.audit = args.audit;
  if (args.per_vertex_cap || args.total_cap) {
    QueryBudget b = QueryBudget::defaults(n);
    if (args.per_vertex_cap) b.per_vertex_cap = *args.per_vertex_cap;
    if (args.total_cap) b.total_cap = *args.total_cap;
    config.budget = b;
  }

  SolveResult result;
  unsigned attempts = 0;
  for (unsigned r = 0; r <= args.retries; ++r) {
    const std::uint64_t seed = r == 0 ? args.algo_seed : derive_seed(args.algo_seed, r);
    ++attempts;
    if (args.baseline) {
      BaselineConfig bc;
      bc.total_cap = args.total_cap;
      result = baseline_angluin_valiant(g, seed, bc);
    } else {
      result = find_hamilton_cycle(g, seed, config);
    }
    if (result.cycle) break;
    std::cerr << "attempt " << attempts << " failed: " << result.stats.failure_phase << " ("
              << result.stats.failure_reason << ")\n";
  }

  nlohmann::json stats = result.stats;
  stats["attempts"] = attempts;
  write_json(args.stats_out, stats);
  if (!result.cycle) {
    std::cerr << "no Hamilton cycle after " << attempts << " attempt(s); phase " << result.stats.failure_phase
              << ": " << result.stats.failure_reason << '\n';
    return kFailure;
  }
  if (!args.cycle_out.empty()) {
    auto out = open_out(args.cycle_out);
    for (Vertex v : result.cycle->order) out << v << '\n';
    out << result.cycle->order.front() << '\n';
  }
  std::cerr << "cycle found: n=" << n << " calls=" << result.stats.oracle_calls_total << " ("
            << static_cast<double>(result.stats.oracle_calls_total) / static_cast<double>(n) << " per vertex)\n";
  return kOk;
}

int cmd_verify(const std::string& graph_path, const std::string& cycle_path) {
  std::ifstream in(graph_path);
  if (!in) throw std::runtime_error("cannot open " + graph_path);
  const StoredGraph g = read_graph(in);
  const Verdict v = verify_hamilton_cycle(g, read_cycle(cycle_path));
  if (!v) {
    std::cout << "invalid: " << v.violation << '\n';
    return kFailure;
  }
  std::cout << "valid Hamilton cycle on " << g.vertex_count() << " vertices\n";
  return kOk;
}

struct BenchArgs {
  std::vector<std::size_t> grid;
  std::size_t seeds = 20;
  double C = 200.0;
  std::uint64_t base_seed = 1;
  std::size_t baseline_seeds = 0;
  double sample_factor = 40.0;
  unsigned threads = 1;
  std::string out_dir = "bench_out";
};

int cmd_bench(const BenchArgs& args) {
  BenchmarkConfig config;
  config.grid = args.grid;
  config.seeds = args.seeds;
  config.C = args.C;
  config.base_seed = args.base_seed;
  config.baseline_seeds = args.baseline_seeds;
  config.solver.sample_factor = args.sample_factor;
  config.threads = args.threads;
  const ScalingReport report = scaling_benchmark(config);

  fs::create_directories(args.out_dir);
  const fs::path dir(args.out_dir);
  {
    auto out = open_out((dir / "runs.ndjson").string());
    write_ndjson(out, report);
  }
  write_json((dir / "summary.json").string(), summary_json(report));
  {
    auto out = open_out((dir / "aggregates.csv").string());
    write_csv(out, report);
  }
  for (const auto& a : report.aggregates) {
    std::cerr << to_string(a.solver) << " n=" << a.n << " runs=" << a.runs << " failures=" << a.failures
              << " calls/n=" << a.mean_calls_per_n << '\n';
  }
  if (report.main_fit) std::cerr << "slope=" << report.main_fit->slope << '\n';
  if (!report.fit_requirements_met) {
    std::cerr << "note: a slope claim needs at least 4 grid points and 20 seeds\n";
  }
  return kOk;
}

int cmd_expansion(const GraphArgs& graph, std::uint64_t algo_seed, std::size_t samples, const std::string& out) {
  const StoredGraph g = load_graph(graph);
  const ExpansionReport r = check_expansion(g, algo_seed, samples);
  nlohmann::json j{{"n", g.vertex_count()},
                   {"p", g.edge_probability()},
                   {"samples_requested", r.samples_requested},
                   {"samples_checked", r.samples_checked},
                   {"violations", r.violations},
                   {"min_ratio", std::isfinite(r.min_ratio) ? nlohmann::json(r.min_ratio) : nlohmann::json()},
                   {"min_ratio_size", r.min_ratio_size},
                   {"full_set_ratio", r.full_set_ratio},
                   {"partial", r.partial},
                   {"passed", r.passed()}};
  if (!r.note.empty()) j["note"] = r.note;
  write_json(out, j);
  return r.passed() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton cycles in random graphs"};
  app.require_subcommand(1);

  GraphArgs gen_args;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a G(n, p) graph file");
  add_graph_options(*gen, gen_args, false);
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Find a Hamilton cycle");
  add_graph_options(*solve, solve_args.graph, true);
  solve->add_option("--algo-seed", solve_args.algo_seed, "Seed of the algorithm's randomness");
  solve->add_option("--retries", solve_args.retries, "Extra attempts with fresh seeds after a failure");
  solve->add_option("--per-vertex-cap", solve_args.per_vertex_cap, "Oracle calls allowed per vertex");
  solve->add_option("--total-cap", solve_args.total_cap, "Oracle calls allowed in total");
  solve->add_option("--sample-factor", solve_args.sample_factor, "Sample size k = factor * ln n")
      ->check(CLI::PositiveNumber);
  solve->add_flag("--audit", solve_args.audit, "Check every step (slow)");
  solve->add_flag("--baseline", solve_args.baseline, "Use the random-walk baseline instead");
  solve->add_option("--cycle-out", solve_args.cycle_out, "Write the cycle here");
  solve->add_option("--stats-out", solve_args.stats_out, "Write run statistics here (default stdout)");

  std::string verify_graph, verify_cycle;
  auto* verify = app.add_subcommand("verify", "Check a cycle file against a graph file");
  verify->add_option("--graph", verify_graph)->required();
  verify->add_option("--cycle", verify_cycle)->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Scaling benchmark over a grid of n");
  bench->add_option("--grid", bench_args.grid, "Values of n")->required()->delimiter(',');
  bench->add_option("--seeds", bench_args.seeds, "Graphs per grid point");
  bench->add_option("--C", bench_args.C, "Coefficient: p = min(1, C ln n / n)")->check(CLI::PositiveNumber);
  bench->add_option("--base-seed", bench_args.base_seed);
  bench->add_option("--baseline-seeds", bench_args.baseline_seeds, "Also run the baseline on the first k seeds");
  bench->add_option("--sample-factor", bench_args.sample_factor)->check(CLI::PositiveNumber);
  bench->add_option("--threads", bench_args.threads)->check(CLI::Range(1u, 256u));
  bench->add_option("--out-dir", bench_args.out_dir, "Directory for runs.ndjson, summary.json, aggregates.csv");

  GraphArgs exp_args;
  std::uint64_t exp_seed = 1;
  std::size_t exp_samples = 1000;
  std::string exp_out;
  auto* expansion = app.add_subcommand("expansion", "Sample the bipartite expansion property");
  add_graph_options(*expansion, exp_args, true);
  expansion->add_option("--algo-seed", exp_seed);
  expansion->add_option("--samples", exp_samples);
  expansion->add_option("-o,--out", exp_out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen(gen_args, gen_out);
    if (*solve) return cmd_solve(solve_args);
    if (*verify) return cmd_verify(verify_graph, verify_cycle);
    if (*bench) return cmd_bench(bench_args);
    if (*expansion) return cmd_expansion(exp_args, exp_seed, exp_samples, exp_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
