#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crl/distribution.hpp"
#include "crl/interface.hpp"
#include "crl/machine.hpp"

namespace crl {

/// Finite-state agent: a deterministic machine over (action, observation)
/// inputs with a distribution over actions attached to every state.
///
/// Agents compiled from a TableAgent carry the table's horizon; any operator
/// check involving such an agent reports bounded semantics at that horizon.
class FsmAgent {
 public:
  FsmAgent(Interface iface, std::vector<ActionDistribution> outputs,
           std::vector<std::size_t> transitions, std::size_t initial = 0,
           std::string name = {});

  /// One-state agent emitting `dist` at every history.
  static FsmAgent constant(const Interface& iface, ActionDistribution dist, std::string name = {});
  static FsmAgent constant(const Interface& iface, std::size_t action, std::string name = {});

  const Interface& interface() const { return iface_; }
  const StateMachine& machine() const { return machine_; }
  std::size_t num_states() const { return machine_.num_states(); }
  std::size_t initial() const { return machine_.initial(); }
  const ActionDistribution& output(std::size_t state) const { return outputs_[state]; }
  const std::vector<ActionDistribution>& outputs() const { return outputs_; }
  std::size_t step(std::size_t state, std::size_t action, std::size_t observation) const {
    return machine_.step(state, action, observation);
  }

  /// Throws InterfaceMismatch for out-of-alphabet symbols.
  std::size_t state_after(const History& history) const;

  const std::optional<std::size_t>& horizon() const { return horizon_; }
  const std::string& name() const { return name_; }
  FsmAgent& set_name(std::string name);
  /// Marks the agent as defined only up to `horizon` (bounded semantics).
  FsmAgent& set_horizon(std::optional<std::size_t> horizon);

 private:
  friend class TableAgent;

  Interface iface_;
  StateMachine machine_;
  std::vector<ActionDistribution> outputs_;
  std::optional<std::size_t> horizon_;
  std::string name_;
};

using AgentSet = std::vector<FsmAgent>;

/// Explicit finite-horizon agent: a distribution for every history of length
/// <= horizon, and a fallback distribution beyond it.
class TableAgent {
 public:
  using Rule = std::function<ActionDistribution(const History&)>;

  /// Tabulates `rule` on every history up to the horizon.
  TableAgent(Interface iface, std::size_t horizon, const Rule& rule, ActionDistribution fallback,
             std::string name = {});

  const Interface& interface() const { return iface_; }
  std::size_t horizon() const { return horizon_; }
  const ActionDistribution& fallback() const { return fallback_; }
  const std::string& name() const { return name_; }

  /// Entries in canonical history order.
  const std::vector<History>& histories() const { return histories_; }
  const ActionDistribution& entry(std::size_t index) const { return entries_[index]; }

  const ActionDistribution& operator()(const History& history) const;

  /// Trie-shaped machine: one state per history up to the horizon plus a sink.
  FsmAgent compile() const;

 private:
  std::size_t index_of(const History& history) const;

  Interface iface_;
  std::size_t horizon_;
  std::vector<History> histories_;
  std::vector<ActionDistribution> entries_;
  std::vector<std::size_t> first_of_length_;
  ActionDistribution fallback_;
  std::string name_;
};

/// lambda(h).
const ActionDistribution& run_agent(const FsmAgent& agent, const History& history);
const ActionDistribution& run_agent(const TableAgent& agent, const History& history);

}  // namespace crl
