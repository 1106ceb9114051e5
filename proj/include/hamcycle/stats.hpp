#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace hamcycle {

struct PhaseTimes {
  double phase1_ms = 0.0;
  double phase2_ms = 0.0;
  double total_ms = 0.0;  // algorithm only; graph generation excluded
};

// Per-run accounting for the solver and the baseline.
struct RunStats {
  bool success = false;
  std::string failure_phase;   // "phase1-failure", "phase2-greedy", ...
  std::string failure_reason;  // "oracle-exhausted at vertex 7", ...

  std::uint64_t n = 0;
  double p = 0.0;
  std::uint64_t graph_seed = 0;
  std::uint64_t algo_seed = 0;

  std::uint64_t oracle_calls_total = 0;
  std::uint64_t oracle_calls_max_per_vertex = 0;
  std::uint64_t phase1_calls = 0;
  std::uint64_t phase2_calls = 0;
  std::uint64_t phase2_rotations = 0;
  std::uint64_t phase2_joins = 0;
  std::uint64_t greedy_absorptions = 0;
  std::uint64_t cycles_in_cover = 0;
  std::uint64_t used_set_peak = 0;
  std::array<std::uint64_t, 2> exposed_edges{0, 0};
  PhaseTimes times;
};

inline void to_json(nlohmann::json& j, const RunStats& s) {
  j = nlohmann::json{
      {"schema", 1},
      {"outcome", s.success ? "success" : "failure"},
      {"n", s.n},
      {"p", s.p},
      {"graph_seed", s.graph_seed},
      {"algo_seed", s.algo_seed},
      {"oracle_calls_total", s.oracle_calls_total},
      {"oracle_calls_max_per_vertex", s.oracle_calls_max_per_vertex},
      {"phase1_calls", s.phase1_calls},
      {"phase2_calls", s.phase2_calls},
      {"phase2_rotations", s.phase2_rotations},
      {"phase2_joins", s.phase2_joins},
      {"greedy_absorptions", s.greedy_absorptions},
      {"cycles_in_cover", s.cycles_in_cover},
      {"used_set_peak", s.used_set_peak},
      {"exposed_edges", s.exposed_edges},
      {"times_ms",
       {{"phase1", s.times.phase1_ms}, {"phase2", s.times.phase2_ms}, {"total", s.times.total_ms}}},
  };
  if (!s.success) {
    j["failure_phase"] = s.failure_phase;
    j["failure_reason"] = s.failure_reason;
  }
}

inline void from_json(const nlohmann::json& j, RunStats& s) {
  s.success = j.at("outcome").get<std::string>() == "success";
  s.failure_phase = j.value("failure_phase", "");
  s.failure_reason = j.value("failure_reason", "");
  j.at("n").get_to(s.n);
  j.at("p").get_to(s.p);
  j.at("graph_seed").get_to(s.graph_seed);
  j.at("algo_seed").get_to(s.algo_seed);
  j.at("oracle_calls_total").get_to(s.oracle_calls_total);
  j.at("oracle_calls_max_per_vertex").get_to(s.oracle_calls_max_per_vertex);
  j.at("phase1_calls").get_to(s.phase1_calls);
  j.at("phase2_calls").get_to(s.phase2_calls);
  j.at("phase2_rotations").get_to(s.phase2_rotations);
  j.at("phase2_joins").get_to(s.phase2_joins);
  j.at("greedy_absorptions").get_to(s.greedy_absorptions);
  j.at("cycles_in_cover").get_to(s.cycles_in_cover);
  j.at("used_set_peak").get_to(s.used_set_peak);
  j.at("exposed_edges").get_to(s.exposed_edges);
  const auto& t = j.at("times_ms");
  t.at("phase1").get_to(s.times.phase1_ms);
  t.at("phase2").get_to(s.times.phase2_ms);
  t.at("total").get_to(s.times.total_ms);
}

}  // namespace hamcycle
