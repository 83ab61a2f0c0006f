#include "crl/random_instances.hpp"

namespace crl {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

std::vector<ActionDistribution> default_menu(std::size_t num_actions) {
  std::vector<ActionDistribution> menu;
  for (std::size_t a = 0; a < num_actions; ++a) {
    menu.push_back(ActionDistribution::point_mass(num_actions, a));
  }
  menu.push_back(ActionDistribution::uniform(num_actions));
  return menu;
}

FsmAgent random_agent(const Interface& iface, std::size_t max_states, std::mt19937_64& rng,
                      std::span<const ActionDistribution> menu, std::string name) {
  std::size_t n = 1 + pick(rng, max_states);
  std::vector<ActionDistribution> outputs;
  for (std::size_t s = 0; s < n; ++s) outputs.push_back(menu[pick(rng, menu.size())]);
  std::vector<std::size_t> transitions(n * iface.num_actions() * iface.num_observations());
  for (auto& t : transitions) t = pick(rng, n);
  return FsmAgent(iface, std::move(outputs), std::move(transitions), 0, std::move(name));
}

FsmEnvironment random_environment(const Interface& iface, std::size_t max_states,
                                  std::mt19937_64& rng, std::string name) {
  std::size_t n = 1 + pick(rng, max_states);
  const std::size_t O = iface.num_observations();
  std::vector<std::vector<Outcome>> dynamics(n * iface.num_actions());
  for (auto& row : dynamics) {
    std::size_t first = pick(rng, n * O);
    std::size_t second = pick(rng, n * O);
    if (first == second || pick(rng, 3) == 0) {
      row.push_back(Outcome{first / O, first % O, Rational(1), Rational(0)});
    } else {
      Rational p = pick(rng, 2) == 0 ? Rational(1, 2) : Rational(1, 3);
      row.push_back(Outcome{first / O, first % O, p, Rational(0)});
      row.push_back(Outcome{second / O, second % O, 1 - p, Rational(0)});
    }
  }
  RewardTable rewards(iface.num_actions(), std::vector<Rational>(O));
  for (auto& r : rewards) {
    for (auto& x : r) x = static_cast<long>(pick(rng, 3)) - 1;
  }
  return FsmEnvironment(iface, n, 0, std::move(dynamics), std::move(rewards), std::move(name));
}

LearningRuleFsm random_rule(const Interface& iface, std::size_t max_states,
                            std::size_t basis_size, std::mt19937_64& rng, std::string name) {
  std::size_t n = 1 + pick(rng, max_states);
  std::vector<std::size_t> select(n);
  for (auto& s : select) s = pick(rng, basis_size);
  std::vector<std::size_t> transitions(n * iface.num_actions() * iface.num_observations());
  for (auto& t : transitions) t = pick(rng, n);
  StateMachine m(iface.num_actions(), iface.num_observations(), n, 0, std::move(transitions));
  return LearningRuleFsm(std::move(m), std::move(select), std::move(name));
}

}  // namespace crl
