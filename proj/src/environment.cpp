#include "crl/environment.hpp"

#include <algorithm>

#include "crl/errors.hpp"

namespace crl {

FsmEnvironment::FsmEnvironment(Interface iface, std::size_t num_states, std::size_t initial,
                               std::vector<std::vector<Outcome>> dynamics, std::string name)
    : iface_(std::move(iface)),
      num_states_(num_states),
      initial_(initial),
      dynamics_(std::move(dynamics)),
      name_(std::move(name)) {
  if (num_states_ == 0) throw SpecError("an environment needs at least one state");
  if (initial_ >= num_states_) throw SpecError("initial environment state out of range");
  if (dynamics_.size() != num_states_ * iface_.num_actions()) {
    throw SpecError("dynamics must have one row per state x action");
  }
  for (std::size_t row = 0; row < dynamics_.size(); ++row) {
    auto& outcomes = dynamics_[row];
    Rational total = 0;
    for (auto& out : outcomes) {
      out.probability.canonicalize();
      out.reward.canonicalize();
      if (out.next >= num_states_) throw SpecError("dynamics target state out of range");
      if (out.observation >= iface_.num_observations()) {
        throw InterfaceMismatch("dynamics observation outside the interface");
      }
      if (out.probability < 0) throw SpecError("negative transition probability");
      total += out.probability;
    }
    if (total != 1) {
      throw SpecError("dynamics row for state " + std::to_string(row / iface_.num_actions()) +
                      ", action " + iface_.action(row % iface_.num_actions()) + " sums to " +
                      total.get_str());
    }
    std::erase_if(outcomes, [](const Outcome& o) { return o.probability == 0; });
  }
}

FsmEnvironment::FsmEnvironment(Interface iface, std::size_t num_states, std::size_t initial,
                               std::vector<std::vector<Outcome>> dynamics, RewardTable rewards,
                               std::string name)
    : FsmEnvironment(std::move(iface), num_states, initial, std::move(dynamics), std::move(name)) {
  if (rewards.size() != iface_.num_actions()) throw SpecError("reward table needs one row per action");
  for (auto& row : rewards) {
    if (row.size() != iface_.num_observations()) {
      throw SpecError("reward table needs one column per observation");
    }
    for (auto& r : row) r.canonicalize();
  }
  for (std::size_t row = 0; row < dynamics_.size(); ++row) {
    std::size_t action = row % iface_.num_actions();
    for (auto& out : dynamics_[row]) out.reward = rewards[action][out.observation];
  }
  reward_table_ = std::move(rewards);
}

Rational FsmEnvironment::max_abs_reward() const {
  Rational best = 0;
  for (const auto& row : dynamics_) {
    for (const auto& out : row) best = std::max(best, Rational(abs(out.reward)));
  }
  return best;
}

Belief initial_belief(const FsmEnvironment& env) {
  Belief b(env.num_states(), Rational(0));
  b[env.initial()] = 1;
  return b;
}

Rational observation_probability(const FsmEnvironment& env, const Belief& belief,
                                 std::size_t action, std::size_t observation) {
  Rational total = 0;
  for (std::size_t s = 0; s < belief.size(); ++s) {
    if (belief[s] == 0) continue;
    for (const auto& out : env.outcomes(s, action)) {
      if (out.observation == observation) total += belief[s] * out.probability;
    }
  }
  return total;
}

std::optional<Belief> update_belief(const FsmEnvironment& env, const Belief& belief,
                                    std::size_t action, std::size_t observation) {
  Belief next(env.num_states(), Rational(0));
  Rational total = 0;
  for (std::size_t s = 0; s < belief.size(); ++s) {
    if (belief[s] == 0) continue;
    for (const auto& out : env.outcomes(s, action)) {
      if (out.observation != observation) continue;
      Rational mass = belief[s] * out.probability;
      next[out.next] += mass;
      total += mass;
    }
  }
  if (total == 0) return std::nullopt;
  for (auto& p : next) p /= total;
  return next;
}

}  // namespace crl
