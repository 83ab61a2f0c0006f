#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"
#include "crl/machine.hpp"
#include "crl/product.hpp"

namespace crl {

/// Outcome of an operator check.
///
/// `horizon` is set for bounded semantics (a table agent took part). The
/// witness is the canonical-least failing history for universal claims and the
/// canonical-least satisfying history for existential ones.
struct Verdict {
  bool holds = false;
  std::optional<std::size_t> horizon;
  std::optional<History> witness;

  bool exact() const { return !horizon.has_value(); }
  /// "exact" or "bounded@T".
  std::string semantics() const;
};

/// Finite-state learning rule: a machine over (action, observation) plus a
/// basis index selected at every state.
class LearningRuleFsm {
 public:
  LearningRuleFsm(StateMachine machine, std::vector<std::size_t> select, std::string name = {});

  /// Rule that always selects `index`.
  static LearningRuleFsm constant(std::size_t num_actions, std::size_t num_observations,
                                  std::size_t index, std::string name = {});

  const StateMachine& machine() const { return machine_; }
  std::size_t select(std::size_t state) const { return select_[state]; }
  const std::vector<std::size_t>& selections() const { return select_; }
  const std::string& name() const { return name_; }

  /// sigma(h).
  std::size_t selection_after(const History& history) const;

 private:
  StateMachine machine_;
  std::vector<std::size_t> select_;
  std::string name_;
};

/// Every lambda in `lambda_set` matches some basis member at every realizable history.
Verdict check_generates(std::span<const FsmAgent> basis, std::span<const FsmAgent> lambda_set,
                        const FsmEnvironment& env);

/// Same pointwise condition over all histories.
Verdict check_uniform_generates(std::span<const FsmAgent> basis,
                                std::span<const FsmAgent> lambda_set);

/// Every lambda is reproduced by some rule: lambda(h) = basis[sigma(h)](h).
/// With `uniform` the environment is ignored and all histories count.
Verdict check_sigma_generates(std::span<const FsmAgent> basis,
                              std::span<const LearningRuleFsm> rules,
                              std::span<const FsmAgent> lambda_set, const FsmEnvironment* env,
                              bool uniform);

enum class Modality { sometimes, never, always };

std::string to_string(Modality m);
Modality parse_modality(const std::string& text);

struct ReachOptions {
  /// Watch-prefix length for bounded semantics; default floor(T/2).
  std::optional<std::size_t> watch_length;
};

Verdict check_reaches(const FsmAgent& agent, std::span<const FsmAgent> basis,
                      const FsmEnvironment& env, Modality modality, ReachOptions options = {});

/// Nodes of `graph` (built with participants[0] acting) where participants[0]
/// and participants[member] agree now and along every realizable continuation.
std::vector<bool> agreement_set(const ProductGraph& graph, std::span<const FsmAgent> participants,
                                std::size_t member);

/// k+1 table agents of horizon T, none equal to
/// `agent` on realizable histories, jointly generating it up to T.
/// Throws PreconditionError when fewer than k+1 realizable histories exist.
std::vector<TableAgent> construct_generating_basis(const FsmAgent& agent,
                                                   const FsmEnvironment& env, std::size_t k,
                                                   std::size_t horizon);

/// A distribution guaranteed to differ from `dist`: its rotation, or a point
/// mass when rotation leaves it unchanged.
ActionDistribution distinct_from(const ActionDistribution& dist);

/// Agents agree at every history. Witness = first disagreement.
Verdict behaviorally_equal(const FsmAgent& a, const FsmAgent& b);

/// Agents agree at every history realizable under `a` in `env`.
Verdict equal_on_realizable(const FsmAgent& a, const FsmAgent& b, const FsmEnvironment& env);

}  // namespace crl
