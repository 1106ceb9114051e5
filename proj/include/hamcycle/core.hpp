#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace hamcycle {

using Vertex = std::uint32_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

enum class OracleFailure { exhausted, budget_exceeded };

inline const char* to_string(OracleFailure kind) {
  return kind == OracleFailure::exhausted ? "oracle-exhausted" : "budget-exceeded";
}

// Thrown by the neighbor oracle. Any such error terminates the whole run.
class OracleError : public std::runtime_error {
 public:
  OracleError(OracleFailure kind, Vertex v)
      : std::runtime_error(std::string(to_string(kind)) + " at vertex " + std::to_string(v)),
        kind_(kind),
        vertex_(v) {}

  OracleFailure kind() const noexcept { return kind_; }
  Vertex vertex() const noexcept { return vertex_; }

 private:
  OracleFailure kind_;
  Vertex vertex_;
};

// A sampled neighborhood held no vertex meeting a search condition.
class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical key of the unordered pair {u, v}.
inline std::uint64_t pair_key(Vertex u, Vertex v) noexcept {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace hamcycle
