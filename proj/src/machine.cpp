#include "crl/machine.hpp"

#include "crl/errors.hpp"
#include "crl/interface.hpp"

namespace crl {

StateMachine::StateMachine(std::size_t num_actions, std::size_t num_observations,
                           std::size_t num_states, std::size_t initial,
                           std::vector<std::size_t> transitions)
    : num_actions_(num_actions),
      num_observations_(num_observations),
      num_states_(num_states),
      initial_(initial),
      transitions_(std::move(transitions)) {
  if (num_states_ == 0) throw SpecError("a machine needs at least one state");
  if (initial_ >= num_states_) throw SpecError("initial state out of range");
  if (transitions_.size() != num_states_ * num_actions_ * num_observations_) {
    throw SpecError("transition table must cover every state x action x observation");
  }
  for (auto next : transitions_) {
    if (next >= num_states_) throw SpecError("transition target out of range");
  }
}

std::size_t StateMachine::run(const History& history) const {
  std::size_t state = initial_;
  for (const auto& step : history) {
    state = this->step(state, step.action, step.observation);
  }
  return state;
}

}  // namespace crl
