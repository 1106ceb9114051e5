// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero on any FAIL
// not named by --expect-fail; the report is also written to --report.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hamcycle/hamcycle.hpp"
#include "support.hpp"

using namespace hamcycle;

namespace {

std::set<int> failed;
std::map<int, std::string> lines;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  lines[id] = std::string(pass ? "PASS" : "FAIL") + "  [" + std::to_string(id) + "] " + what + ": " + detail;
  std::cerr << lines[id] << std::endl;
  if (!pass) failed.insert(id);
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

double ln(double x) { return std::log(x); }

// Criterion 5 samples: cycle-length counts of M1 u M2 per matching pair.
struct CoverSamples {
  std::size_t pairs = 0;
  std::vector<double> sum = std::vector<double>(6, 0.0);
  std::vector<double> sum_sq = std::vector<double>(6, 0.0);
  std::size_t within_2ln = 0;

  void add(const StoredGraph& g, std::uint64_t seed) {
    const Bipartition part = Bipartition::balanced(g.vertex_count());
    NeighborOracle o(g, seed);
    const Matching m1 = fast_perfect_matching(o, part);
    reset_exposure(o);
    const Matching m2 = fast_perfect_matching(o, part);
    const CycleCover cover = cycle_cover(m1, m2, part);
    std::vector<double> count(6, 0.0);
    for (const auto& c : cover.cycles) {
      if (c.size() % 2 == 0 && c.size() / 2 <= 5) count[c.size() / 2] += 1;
    }
    for (std::size_t k = 1; k <= 5; ++k) {
      sum[k] += count[k];
      sum_sq[k] += count[k] * count[k];
    }
    within_2ln += static_cast<double>(cover.cycles.size()) <= 2.0 * ln(static_cast<double>(g.vertex_count()));
    ++pairs;
  }
};

struct GridResult {
  std::vector<RunRecord> runs;
  std::size_t verify_failures = 0;
  std::size_t invalid_cycles = 0;  // solver threw on its own check
};

GridResult run_grid(const std::vector<std::size_t>& grid, std::size_t seeds, std::size_t baseline_seeds,
                    CoverSamples* cover) {
  GridResult out;
  for (std::size_t n : grid) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < seeds; ++i) {
      const std::uint64_t gs = bench_graph_seed(1, n, i);
      const std::uint64_t as = bench_algo_seed(gs);
      const StoredGraph g = generate_graph(n, probability_for(n, 200), gs);
      try {
        SolveResult r = find_hamilton_cycle(g, as);
        if (r.cycle && !verify_hamilton_cycle(g, *r.cycle)) {
          ++out.verify_failures;
          r.stats.success = false;
        }
        out.runs.push_back({SolverKind::main, i, r.stats});
      } catch (const std::logic_error& e) {
        ++out.invalid_cycles;
        std::cerr << "n=" << n << " seed " << i << ": " << e.what() << '\n';
      }
      if (i < baseline_seeds) {
        out.runs.push_back({SolverKind::baseline, i, baseline_angluin_valiant(g, as).stats});
      }
      if (cover && n == 4096) {
        for (std::uint64_t s = 0; s < 10; ++s) cover->add(g, derive_seed(as, 0xc0 + s));
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "grid n=" << n << " done in " << fmt(secs, 1) << " s\n";
  }
  return out;
}

void criteria_1_to_3_5_8() {
  CoverSamples cover;
  GridResult a = run_grid({1u << 10, 1u << 12, 1u << 14}, 100, 20, &cover);
  GridResult b = run_grid({1u << 11, 1u << 13}, 20, 20, nullptr);
  std::vector<RunRecord> all = a.runs;
  all.insert(all.end(), b.runs.begin(), b.runs.end());
  const auto agg = aggregate_runs(all);

  // 1. success rate and verification.
  {
    bool pass = a.verify_failures == 0 && a.invalid_cycles == 0;
    std::ostringstream d;
    for (std::size_t n : {1u << 10, 1u << 12, 1u << 14}) {
      std::size_t runs = 0, ok = 0;
      std::map<std::string, int> why;
      for (const auto& r : a.runs) {
        if (r.solver != SolverKind::main || r.stats.n != n) continue;
        ++runs;
        if (r.stats.success) {
          ++ok;
        } else {
          ++why[r.stats.failure_phase];
        }
      }
      pass = pass && runs == 100 && ok >= 99;
      d << "n=" << n << " " << ok << "/" << runs;
      for (const auto& [phase, k] : why) d << " (" << phase << " x" << k << ")";
      d << "; ";
    }
    d << "verify failures " << a.verify_failures << ", invalid cycles " << a.invalid_cycles;
    report(1, pass, "end-to-end success >= 99% per n, zero invalid cycles", d.str());
  }

  // 2. linearity of the main solver, super-linearity of the baseline.
  {
    const auto main_fit = fit_for(agg, SolverKind::main);
    const auto base_fit = fit_for(agg, SolverKind::baseline);
    std::ostringstream d;
    d << "calls/n:";
    double first_ratio = 0, last_ratio = 0;
    for (const auto& x : agg) {
      if (x.solver == SolverKind::main) d << " " << x.n << "->" << fmt(x.mean_calls_per_n, 2);
    }
    d << "; baseline calls/n:";
    for (const auto& x : agg) {
      if (x.solver != SolverKind::baseline) continue;
      d << " " << x.n << "->" << fmt(x.mean_calls_per_n, 2);
      if (first_ratio == 0) first_ratio = x.mean_calls_per_n;
      last_ratio = x.mean_calls_per_n;
    }
    const bool main_ok = main_fit && std::abs(main_fit->slope - 1.0) <= 0.1;
    const double growth = first_ratio > 0 ? last_ratio / first_ratio : 0.0;
    const bool base_ok = base_fit && (base_fit->ci_low > 1.0 || growth >= 1.5);
    if (main_fit) {
      d << "; main slope " << fmt(main_fit->slope) << " CI [" << fmt(main_fit->ci_low) << ", "
        << fmt(main_fit->ci_high) << "]";
    }
    if (base_fit) {
      d << "; baseline slope " << fmt(base_fit->slope) << " CI [" << fmt(base_fit->ci_low) << ", "
        << fmt(base_fit->ci_high) << "], calls/n growth x" << fmt(growth, 2);
    }
    report(2, main_ok && base_ok, "log-log slope 1.0 +- 0.1; baseline visibly super-linear", d.str());
  }

  // 3. per-vertex cap.
  {
    bool pass = true;
    std::ostringstream d;
    for (std::size_t n : {1u << 10, 1u << 12, 1u << 14}) {
      std::uint64_t worst = 0;
      for (const auto& r : a.runs) {
        if (r.solver == SolverKind::main && r.stats.n == n) worst = std::max(worst, r.stats.oracle_calls_max_per_vertex);
      }
      const double cap = 100 * ln(double(n));
      pass = pass && double(worst) <= cap;
      d << "n=" << n << " max " << worst << " (100 ln n = " << fmt(cap, 0) << ", 50 ln n = " << fmt(cap / 2, 0)
        << "); ";
    }
    report(3, pass, "max per-vertex calls <= 100 ln n", d.str());
  }

  // 5. cycle-cover statistics.
  {
    const double k_pairs = static_cast<double>(cover.pairs);
    bool pass = cover.pairs >= 1000;
    std::ostringstream d;
    d << cover.pairs << " pairs;";
    for (std::size_t k = 1; k <= 5; ++k) {
      const double mean = cover.sum[k] / k_pairs;
      const double var = cover.sum_sq[k] / k_pairs - mean * mean;
      const double se = std::sqrt(var / k_pairs);
      const bool ok = std::abs(mean - 1.0 / double(k)) <= 3 * se;
      pass = pass && ok;
      d << " k=" << k << " " << fmt(mean) << "+-" << fmt(se) << (ok ? "" : "(!)");
    }
    const double frac = double(cover.within_2ln) / k_pairs;
    pass = pass && frac >= 0.95;
    d << "; cycles <= 2 ln n in " << fmt(100 * frac, 1) << "%";
    report(5, pass, "2k-cycle counts within 3 sigma of 1/k, few cycles", d.str());
  }

  // 8. exposure bound at n = 2^12.
  {
    std::size_t runs = 0, over = 0;
    std::uint64_t worst = 0;
    for (const auto& r : a.runs) {
      if (r.solver != SolverKind::main || r.stats.n != 4096 || !r.stats.success) continue;
      ++runs;
      for (auto e : r.stats.exposed_edges) {
        worst = std::max(worst, e);
        over += e > 4 * 4096;
      }
    }
    report(8, runs > 0 && over == 0, "exposed edges <= 4n per matching at n=4096",
           std::to_string(runs) + " runs, worst " + std::to_string(worst) + " vs 4n = 16384");
  }
}

void criterion_4() {
  bool pass = true;
  std::ostringstream d;
  for (std::size_t n : {4, 6, 8}) {
    const std::uint64_t target = 100000;
    std::vector<std::uint64_t> first(n - 1, 0), after(n - 1, 0);
    std::uint64_t got_first = 0, got_after = 0;
    for (std::uint64_t s = 0; got_first < target || got_after < target; ++s) {
      const StoredGraph g = generate_graph(n, 1.0, derive_seed(n, s));
      NeighborOracle o(g, derive_seed(s, n));
      try {
        const Vertex w = o.new_neighbor(0);
        if (got_first < target) {
          ++first[w - 1];
          ++got_first;
        }
        reset_exposure(o);
        const Vertex x = o.new_neighbor(0);
        if (got_after < target) {
          ++after[x - 1];
          ++got_after;
        }
      } catch (const OracleError&) {
      }
    }
    const std::vector<double> uniform(n - 1, 1.0 / double(n - 1));
    const auto c1 = ref::chi_square(first, uniform);
    const auto c2 = ref::chi_square(after, uniform);
    pass = pass && c1.p_value > 0.001 && c2.p_value > 0.001;
    d << "n=" << n << " p=" << fmt(c1.p_value) << " post-reset p=" << fmt(c2.p_value) << "; ";
  }
  report(4, pass, "new_neighbor marginals uniform on K_4, K_6, K_8 (10^5 calls each)", d.str());
}

void criterion_6() {
  const std::size_t n = 2048;
  const StoredGraph g = generate_graph(n, probability_for(n, 200), derive_seed(6, 6));
  const ExpansionReport r = check_expansion(g, 6, 1000);
  std::ostringstream d;
  d << r.samples_checked << " subsets, " << r.violations << " violations, min ratio " << fmt(r.min_ratio)
    << " at |A'|=" << r.min_ratio_size << " (threshold 0.01)";
  if (r.partial) d << "; stopped early: " << r.note;
  report(6, r.samples_checked == 1000 && r.passed(), "neighborhood expansion at n=2048", d.str());
}

void criterion_7() {
  const auto r = ref::fuzz_path_seq(7, 1000000, 2000);
  std::ostringstream d;
  d << r.ops << " ops, " << r.mutations << " mutations, " << r.invariant_checks << " invariant checks";
  if (!r.mismatch.empty()) d << "; " << r.mismatch;
  report(7, r.ops == 1000000 && r.mismatch.empty(), "PathSeq matches the array model", d.str());
}

void criterion_9() {
  std::size_t successes = 0, hamiltonian = 0, contradictions = 0, invalid = 0;
  std::map<std::string, int> why;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const StoredGraph g = generate_graph(8, 0.5, derive_seed(9, s));
    const bool ham = brute_force_hamilton(g).has_value();
    hamiltonian += ham;
    try {
      const SolveResult r = find_hamilton_cycle(g, derive_seed(s, 9));
      if (!r.cycle) {
        ++why[r.stats.failure_phase + " " + r.stats.failure_reason.substr(0, r.stats.failure_reason.find(' '))];
        continue;
      }
      ++successes;
      if (!verify_hamilton_cycle(g, *r.cycle)) ++invalid;
      if (!ham) ++contradictions;
    } catch (const std::logic_error&) {
      ++invalid;
    }
  }
  std::ostringstream d;
  d << successes << "/200 solved, " << hamiltonian << "/200 Hamiltonian by brute force, " << contradictions
    << " contradictions, " << invalid << " invalid cycles";
  for (const auto& [w, k] : why) d << "; " << w << " x" << k;
  report(9, contradictions == 0 && invalid == 0, "n=8 cross-check against brute force", d.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  std::string report_path;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--expect-fail") {
      expected.insert(std::stoi(argv[i + 1]));
    } else if (flag == "--report") {
      report_path = argv[i + 1];
    } else {
      std::cerr << "usage: acceptance [--expect-fail ID]... [--report FILE]\n";
      return 2;
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  criterion_4();
  criterion_6();
  criterion_7();
  criterion_9();
  criteria_1_to_3_5_8();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream out;
  for (const auto& [id, line] : lines) out << line << '\n';
  int unexpected = 0;
  for (int id : failed) {
    if (expected.count(id)) {
      out << "criterion " << id << " failed as expected\n";
    } else {
      ++unexpected;
    }
  }
  for (int id : expected) {
    if (!failed.count(id)) out << "criterion " << id << " was expected to fail but passed\n";
  }
  out << failed.size() << " of " << lines.size() << " criteria failed, " << unexpected << " unexpectedly, in "
      << fmt(secs, 1) << " s\n";
  std::cout << out.str() << std::flush;
  if (!report_path.empty()) std::ofstream(report_path) << out.str();
  return unexpected == 0 ? 0 : 1;
}
