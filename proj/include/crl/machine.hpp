#pragma once

#include <cstddef>
#include <vector>

namespace crl {

class History;

/// Deterministic transition structure consuming (action, observation) pairs.
/// Shared by agents and learning rules.
class StateMachine {
 public:
  StateMachine() = default;
  /// `transitions` is indexed [(state * A + action) * O + observation].
  StateMachine(std::size_t num_actions, std::size_t num_observations, std::size_t num_states,
               std::size_t initial, std::vector<std::size_t> transitions);

  std::size_t num_states() const { return num_states_; }
  std::size_t initial() const { return initial_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_observations() const { return num_observations_; }

  std::size_t step(std::size_t state, std::size_t action, std::size_t observation) const {
    return transitions_[(state * num_actions_ + action) * num_observations_ + observation];
  }

  /// Folds `step` over the history from the initial state. Symbols are not validated.
  std::size_t run(const History& history) const;

  const std::vector<std::size_t>& transitions() const { return transitions_; }

 private:
  std::size_t num_actions_ = 0;
  std::size_t num_observations_ = 0;
  std::size_t num_states_ = 0;
  std::size_t initial_ = 0;
  std::vector<std::size_t> transitions_;
};

}  // namespace crl
