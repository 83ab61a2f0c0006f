#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"

namespace crl {

/// How an agent's reward stream is scored.
class PerformanceSpec {
 public:
  enum class Kind { discounted, finite_horizon_average };

  /// Expected sum of gamma^t r_{t+1}; requires 0 <= gamma < 1.
  static PerformanceSpec discounted(Rational gamma);
  /// (1/T) times the expected sum of the next T rewards; requires T >= 1.
  static PerformanceSpec finite_horizon_average(std::size_t horizon);

  Kind kind() const { return kind_; }
  const Rational& gamma() const { return gamma_; }
  std::size_t horizon() const { return horizon_; }
  /// "discounted(gamma=9/10)" or "finite_horizon_average(T=20)".
  std::string describe() const;

 private:
  Kind kind_ = Kind::discounted;
  Rational gamma_;
  std::size_t horizon_ = 0;
};

struct ValueOptions;

/// Values over (agent state, environment state) pairs.
class ValueTable {
 public:

  /// Throws Error for pairs outside the table.
  const Rational& at(std::size_t agent_state, std::size_t env_state) const;
  bool contains(std::size_t agent_state, std::size_t env_state) const;
  /// Sum over s of belief(s) * V(agent_state, s).
  Rational expected(std::size_t agent_state, const Belief& belief) const;
  std::size_t size() const { return values_.size(); }

 private:
  friend ValueTable value_table(const FsmAgent&, const FsmEnvironment&, const PerformanceSpec&,
                                const ValueOptions&);
  ValueTable(std::size_t env_states, std::vector<std::size_t> slot, std::vector<Rational> values)
      : env_states_(env_states), slot_(std::move(slot)), values_(std::move(values)) {}

  std::size_t env_states_;
  /// Index into values_ per (agent state * S + env state), npos when absent.
  std::vector<std::size_t> slot_;
  std::vector<Rational> values_;
};

struct ValueOptions {
  /// Evaluate every (agent state, env state) pair, not only those reachable
  /// from the initial pair.
  bool all_pairs = false;
  /// Discounted sums over table agents are truncated to this many steps.
  std::optional<std::size_t> truncation;
};

/// Exact values: a linear solve for discounted performance on finite-state
/// agents, dynamic programming for finite horizons and truncated sums.
/// Throws PreconditionError for table agents under discounting without a truncation.
ValueTable value_table(const FsmAgent& agent, const FsmEnvironment& env,
                       const PerformanceSpec& perf, const ValueOptions& options = {});

/// v(lambda, e | h): the expectation of the value over the posterior on
/// hidden environment states at h. Throws PreconditionError if h is not realizable.
Rational compute_value(const FsmAgent& agent, const FsmEnvironment& env,
                       const PerformanceSpec& perf, const History& from = {},
                       std::optional<std::size_t> truncation = std::nullopt);

struct OptimalSet {
  std::vector<Rational> values;
  /// Indices of every maximizer, ascending.
  std::vector<std::size_t> optimal;
};

/// Values from h0 and all their exact maximizers.
OptimalSet optimal_agents(std::span<const FsmAgent> agents, const FsmEnvironment& env,
                          const PerformanceSpec& perf,
                          std::optional<std::size_t> truncation = std::nullopt);

}  // namespace crl
