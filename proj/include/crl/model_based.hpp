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

/// Learning rule that, at every history, selects the basis member with the
/// highest value in an internal model, given the model's posterior over its
/// hidden states. Ties go to the lowest index.
///
/// Rule states pair an exact posterior over model states with the basis
/// members' machine states. When an observation has zero likelihood under
/// the model, the posterior is propagated without conditioning on it.
class ModelBasedRule {
 public:
  const LearningRuleFsm& rule() const { return rule_; }
  const std::vector<FsmAgent>& basis() const { return basis_; }
  const FsmEnvironment& model() const { return model_; }
  const PerformanceSpec& performance() const { return perf_; }

  std::size_t num_states() const { return beliefs_.size(); }
  const Belief& belief(std::size_t state) const { return beliefs_[state]; }
  const std::vector<std::size_t>& basis_states(std::size_t state) const {
    return basis_states_[state];
  }
  /// Model value of each basis member at this rule state.
  const std::vector<Rational>& scores(std::size_t state) const { return scores_[state]; }

  /// lambda(h) = basis[sigma(h)](h), as a finite-state agent.
  FsmAgent generated_agent(std::string name = "model_based") const;

 private:
  friend ModelBasedRule make_model_based_rule(std::vector<FsmAgent>, const FsmEnvironment&,
                                              const PerformanceSpec&, std::size_t);
  ModelBasedRule(std::vector<FsmAgent> basis, FsmEnvironment model, PerformanceSpec perf,
                 LearningRuleFsm rule)
      : basis_(std::move(basis)),
        model_(std::move(model)),
        perf_(std::move(perf)),
        rule_(std::move(rule)) {}

  std::vector<FsmAgent> basis_;
  FsmEnvironment model_;
  PerformanceSpec perf_;
  LearningRuleFsm rule_;
  std::vector<Belief> beliefs_;
  std::vector<std::vector<std::size_t>> basis_states_;
  std::vector<std::vector<Rational>> scores_;
};

/// Builds the rule by exploring (posterior, basis states) under every input.
/// Throws PreconditionError if more than `max_states` rule states arise.
ModelBasedRule make_model_based_rule(std::vector<FsmAgent> basis, const FsmEnvironment& model,
                                     const PerformanceSpec& perf, std::size_t max_states = 20000);

struct ReplanReport {
  std::size_t horizon = 0;
  /// Realizable histories of each length 0..T.
  std::vector<std::size_t> histories;
  /// Realizable histories of each length whose selection differs from their parent's.
  std::vector<std::size_t> replans;
  /// Every realizable history up to T has a realizable extension where the selection changes.
  bool every_history_replans = false;
  /// First realizable history (canonical order) with no such extension.
  std::optional<History> settled_witness;
};

/// Replanning profile of the agent the rule generates, run in `env`.
ReplanReport count_replans(const ModelBasedRule& rule, const FsmEnvironment& env,
                           std::size_t horizon);

}  // namespace crl
