#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crl/interface.hpp"
#include "crl/rational.hpp"

namespace crl {

/// One entry of a dynamics row: the environment moves to `next` and emits
/// `observation` with `probability`, paying `reward`.
struct Outcome {
  std::size_t next = 0;
  std::size_t observation = 0;
  Rational probability;
  Rational reward;
};

/// r : A x O -> Q, indexed [action][observation].
using RewardTable = std::vector<std::vector<Rational>>;

/// Finite stochastic environment. Dynamics emit (next state, observation)
/// jointly so hidden state changes are expressible.
///
/// Rewards live on outcomes. Environments built from a RewardTable have
/// reward(a, o) on every outcome; builders whose reward depends on hidden
/// state (switching MDPs) set per-outcome rewards directly.
class FsmEnvironment {
 public:
  /// `dynamics` is indexed [state * A + action]. Zero-probability entries are
  /// dropped; rows must sum to exactly 1. Throws SpecError otherwise.
  FsmEnvironment(Interface iface, std::size_t num_states, std::size_t initial,
                 std::vector<std::vector<Outcome>> dynamics, std::string name = {});

  /// Same, overwriting every outcome's reward with table[action][observation].
  FsmEnvironment(Interface iface, std::size_t num_states, std::size_t initial,
                 std::vector<std::vector<Outcome>> dynamics, RewardTable rewards,
                 std::string name = {});

  const Interface& interface() const { return iface_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t initial() const { return initial_; }
  std::span<const Outcome> outcomes(std::size_t state, std::size_t action) const {
    return dynamics_[state * iface_.num_actions() + action];
  }
  const std::optional<RewardTable>& reward_table() const { return reward_table_; }
  const std::string& name() const { return name_; }

  Rational max_abs_reward() const;

 private:
  Interface iface_;
  std::size_t num_states_;
  std::size_t initial_;
  std::vector<std::vector<Outcome>> dynamics_;
  std::optional<RewardTable> reward_table_;
  std::string name_;
};

/// Distribution over hidden environment states.
using Belief = std::vector<Rational>;

Belief initial_belief(const FsmEnvironment& env);

/// Posterior after taking `action` and seeing `observation`; nullopt when the
/// observation has zero probability under the belief.
std::optional<Belief> update_belief(const FsmEnvironment& env, const Belief& belief,
                                    std::size_t action, std::size_t observation);

/// Probability of `observation` after `action` under the belief.
Rational observation_probability(const FsmEnvironment& env, const Belief& belief,
                                 std::size_t action, std::size_t observation);

}  // namespace crl
