#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"
#include "crl/operators.hpp"
#include "crl/performance.hpp"

namespace crl {

/// (environment, performance, agent set, basis). The basis is meant to be a
/// proper subset of the agents that generates them; both premises are checked
/// and reported rather than enforced.
struct CrlInstance {
  FsmEnvironment env;
  PerformanceSpec perf;
  std::vector<FsmAgent> agents;
  std::vector<FsmAgent> basis;
  /// Truncation depth for discounted values of table agents.
  std::optional<std::size_t> truncation;
};

struct ReachEntry {
  std::size_t agent_index = 0;
  std::string id;
  Verdict never;
};

struct CrlReport {
  std::vector<Rational> values;
  std::vector<std::size_t> optimal;
  std::vector<ReachEntry> reaches;
  /// Every optimal agent never reaches the basis.
  bool is_crl = false;
  Verdict basis_generates;
  /// Each basis member behaves like some agent, and some agent like no member.
  bool basis_proper_subset = false;
};

/// Display id of agent i: its name, or "#i" when unnamed.
std::string agent_id(const std::vector<FsmAgent>& agents, std::size_t index);

CrlReport classify_crl(const CrlInstance& instance);

/// Same instance with every optimal agent added to the basis (members already
/// present up to behavioral equality are not duplicated).
CrlInstance augment_with_optimal(const CrlInstance& instance);

}  // namespace crl
