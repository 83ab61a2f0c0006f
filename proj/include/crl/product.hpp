#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"
#include "crl/interface.hpp"

namespace crl {

struct ProductNode {
  std::vector<std::size_t> machine_states;
  /// Environment states consistent with the history so far (sorted). Empty
  /// when the graph was built without an environment.
  std::vector<std::size_t> env_support;
  /// Length of the canonical (shortest, then lexicographically least) history.
  std::size_t depth = 0;
  std::optional<std::size_t> parent;
  Step via;
};

struct ProductEdge {
  Step label;
  /// The acting agent's probability of label.action (1 when ungated).
  Rational action_probability;
  std::size_t target = 0;
};

/// Reachable joint states of (participants..., environment).
///
/// The environment component is the support of the posterior over hidden
/// states, so every history reaches exactly one node and the graph is
/// deterministic per (action, observation) label. Edges exist exactly for
/// realizable transitions. Node 0 is h0; nodes are numbered in canonical BFS
/// order, so `history_to` returns the canonical least history of each node.
class ProductGraph {
 public:
  std::size_t size() const { return nodes_.size(); }
  const ProductNode& node(std::size_t id) const { return nodes_[id]; }
  std::span<const ProductEdge> edges(std::size_t id) const { return edges_[id]; }
  std::optional<std::size_t> successor(std::size_t id, Step label) const;

  History history_to(std::size_t id) const;
  std::vector<std::vector<std::size_t>> predecessors() const;
  std::size_t max_depth() const;

  /// Follows `history` from the initial node; nullopt if some step is unrealizable.
  std::optional<std::size_t> walk(const History& history) const;

 private:
  friend struct ProductBuilder;
  std::vector<ProductNode> nodes_;
  std::vector<std::vector<ProductEdge>> edges_;
};

/// Raw inputs for a product construction.
struct ProductInputs {
  std::size_t num_actions = 0;
  std::size_t num_observations = 0;
  std::vector<const StateMachine*> machines;
  /// Gates actions by its output; its machine must be machines[0].
  const FsmAgent* actor = nullptr;
  /// Gates observations. Without it every observation follows every action.
  const FsmEnvironment* env = nullptr;
};

ProductGraph build_product(const ProductInputs& inputs);

/// Product of agents with an environment; the first participant acts, the
/// rest track the same (action, observation) stream.
ProductGraph product_reachable(std::span<const FsmAgent> participants, const FsmEnvironment& env);

/// Product of agents under every (action, observation) input, ungated.
ProductGraph product_uniform(std::span<const FsmAgent> participants);

/// Throws InterfaceMismatch unless every agent uses `iface`.
void require_interface(std::span<const FsmAgent> agents, const Interface& iface);

/// Smallest table horizon among the agents, if any is table-backed.
std::optional<std::size_t> min_horizon(std::span<const FsmAgent> agents);

}  // namespace crl
