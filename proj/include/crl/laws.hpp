#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crl {

/// Tally for one algebraic law over a fuzz campaign. `premised` counts
/// instances where the law's hypothesis held (the rest are vacuous).
struct LawReport {
  std::string law;
  std::size_t premised = 0;
  std::size_t violations = 0;
  /// Human-readable description of the first violation.
  std::optional<std::string> first_violation;
};

struct FuzzOptions {
  std::size_t instances = 500;
  std::uint64_t seed = 0;
  std::size_t max_agent_states = 2;
  std::size_t max_env_states = 2;
};

/// Random-instance check of the operator laws on exact (pure FSM) inputs.
std::vector<LawReport> fuzz_operator_laws(const FuzzOptions& options);

}  // namespace crl
