#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"
#include "crl/operators.hpp"

namespace crl {

/// Point masses on every action followed by the uniform distribution. Small
/// menus make output equalities (and hence interesting verdicts) common.
std::vector<ActionDistribution> default_menu(std::size_t num_actions);

/// Agent with 1..max_states states, outputs drawn from `menu`, random transitions.
FsmAgent random_agent(const Interface& iface, std::size_t max_states, std::mt19937_64& rng,
                      std::span<const ActionDistribution> menu, std::string name = {});

/// Environment with 1..max_states states; each row has one or two outcomes
/// with probabilities from {1, 1/2, 1/3, 2/3}; rewards r(a, o) in {-1, 0, 1}.
FsmEnvironment random_environment(const Interface& iface, std::size_t max_states,
                                  std::mt19937_64& rng, std::string name = {});

/// Learning rule with 1..max_states states selecting indices below `basis_size`.
LearningRuleFsm random_rule(const Interface& iface, std::size_t max_states,
                            std::size_t basis_size, std::mt19937_64& rng, std::string name = {});

}  // namespace crl
