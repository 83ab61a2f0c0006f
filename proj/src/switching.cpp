#include <map>
#include <utility>

#include "crl/catalog.hpp"
#include "crl/environments.hpp"
#include "crl/errors.hpp"
#include "crl/model_based.hpp"

namespace crl {

void validate(const TabularMdp& mdp) {
  const std::size_t S = mdp.num_states(), A = mdp.num_actions();
  if (S == 0 || A == 0) throw SpecError("MDP '" + mdp.name + "' needs states and actions");
  if (mdp.transitions.size() != S * A) {
    throw SpecError("MDP '" + mdp.name + "' needs one transition row per (state, action)");
  }
  if (mdp.start >= S) throw SpecError("MDP '" + mdp.name + "' start state out of range");
  if (!mdp.terminal.empty() && mdp.terminal.size() != S) {
    throw SpecError("MDP '" + mdp.name + "' terminal flags must cover every state");
  }
  if (mdp.is_terminal(mdp.start)) throw SpecError("MDP start state cannot be terminal");
  for (std::size_t row = 0; row < mdp.transitions.size(); ++row) {
    Rational total = 0;
    for (const auto& t : mdp.transitions[row]) {
      if (t.next >= S) throw SpecError("MDP '" + mdp.name + "' transition target out of range");
      if (t.probability < 0) throw SpecError("negative transition probability");
      total += t.probability;
    }
    if (total != 1) {
      throw SpecError("MDP '" + mdp.name + "' row (" + mdp.states[row / A] + ", " +
                      mdp.actions[row % A] + ") sums to " + total.get_str());
    }
  }
}

void validate(const SwitchingSpec& spec) {
  if (spec.mdps.empty()) throw SpecError("switching spec needs at least one MDP");
  if (spec.p_switch < 0 || spec.p_switch > 1) throw SpecError("p_switch must lie in [0, 1]");
  if (spec.initial_index >= spec.mdps.size()) throw SpecError("initial MDP index out of range");
  for (const auto& mdp : spec.mdps) {
    validate(mdp);
    if (mdp.states != spec.mdps[0].states || mdp.actions != spec.mdps[0].actions) {
      throw SpecError("MDP '" + mdp.name + "' does not share the suite's state and action spaces");
    }
  }
}

Interface switching_interface(const SwitchingSpec& spec) {
  validate(spec);
  return Interface(spec.mdps[0].actions, spec.mdps[0].states);
}

FsmEnvironment build_switching_env(const SwitchingSpec& spec) {
  Interface iface = switching_interface(spec);
  const std::size_t n = spec.mdps.size();
  const std::size_t S = iface.num_observations(), A = iface.num_actions();
  const TabularMdp& first = spec.mdps[spec.initial_index];

  std::vector<std::vector<Outcome>> dynamics(n * S * A);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        auto& row = dynamics[(i * S + s) * A + a];
        for (std::size_t j = 0; j < n; ++j) {
          Rational pj = n == 1 ? Rational(1)
                        : j == i ? Rational(1 - spec.p_switch)
                                 : Rational(spec.p_switch / Rational(static_cast<long>(n - 1)));
          if (pj == 0) continue;
          const TabularMdp& mdp = spec.mdps[j];
          for (const auto& t : mdp.row(s, a)) {
            std::size_t lands = mdp.is_terminal(t.next) ? mdp.start : t.next;
            row.push_back({j * S + lands, lands, pj * t.probability, t.reward});
          }
        }
      }
    }
  }
  return FsmEnvironment(std::move(iface), n * S, spec.initial_index * S + first.start,
                        std::move(dynamics), "switching");
}

SwitchingSpec two_phase_bandit(Rational p_switch) {
  SwitchingSpec spec;
  for (std::size_t good = 0; good < 2; ++good) {
    TabularMdp mdp;
    mdp.states = {"win", "lose"};
    mdp.actions = {"a0", "a1"};
    mdp.start = 1;
    mdp.name = good == 0 ? "phase_A" : "phase_B";
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        if (a == good) {
          mdp.transitions.push_back({{0, Rational(1), Rational(1)}});
        } else {
          mdp.transitions.push_back({{1, Rational(1), Rational(0)}});
        }
      }
    }
    spec.mdps.push_back(std::move(mdp));
  }
  spec.p_switch = std::move(p_switch);
  return spec;
}

namespace {

constexpr std::size_t kWin = 0;

}  // namespace

FsmAgent win_stay_lose_shift(const Interface& iface, std::string name) {
  std::vector<ActionDistribution> outputs{ActionDistribution::point_mass(2, 0),
                                          ActionDistribution::point_mass(2, 1)};
  std::vector<std::size_t> transitions;
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t o = 0; o < 2; ++o) transitions.push_back(o == kWin ? a : 1 - a);
    }
  }
  return FsmAgent(iface, std::move(outputs), std::move(transitions), 0, std::move(name));
}

FsmAgent converging_wsls(const Interface& iface, std::size_t steps, std::string name) {
  // State k * 2 + action: k steps taken (saturating at `steps`), `action` played next.
  std::vector<ActionDistribution> outputs;
  std::vector<std::size_t> transitions;
  for (std::size_t k = 0; k <= steps; ++k) {
    for (std::size_t cur = 0; cur < 2; ++cur) {
      outputs.push_back(ActionDistribution::point_mass(2, cur));
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t o = 0; o < 2; ++o) {
          if (k == steps) {
            transitions.push_back(k * 2 + cur);
          } else {
            transitions.push_back((k + 1) * 2 + (o == kWin ? a : 1 - a));
          }
        }
      }
    }
  }
  if (name.empty()) name = "converging_wsls_" + std::to_string(steps);
  return FsmAgent(iface, std::move(outputs), std::move(transitions), 0, std::move(name));
}

ToyCrl two_phase_toy(Rational p_switch, std::size_t max_converge) {
  SwitchingSpec spec = two_phase_bandit(std::move(p_switch));
  FsmEnvironment env = build_switching_env(spec);
  const Interface& iface = env.interface();
  PerformanceSpec perf = PerformanceSpec::discounted(make_rational(9, 10));

  std::vector<FsmAgent> basis{FsmAgent::constant(iface, 0, "always_a0"),
                              FsmAgent::constant(iface, 1, "always_a1")};
  std::vector<FsmAgent> agents = basis;
  agents.push_back(win_stay_lose_shift(iface));
  for (std::size_t k = 1; k <= max_converge; ++k) agents.push_back(converging_wsls(iface, k));
  std::vector<ActionDistribution> menu{ActionDistribution::point_mass(2, 0),
                                       ActionDistribution::point_mass(2, 1)};
  for (auto& agent : catalog::memoryless_agents(iface, menu)) agents.push_back(std::move(agent));
  agents.push_back(make_model_based_rule(basis, env, perf).generated_agent("model_based"));

  CrlInstance instance{env, perf, std::move(agents), std::move(basis), std::nullopt};
  return ToyCrl{std::move(spec), std::move(instance)};
}

}  // namespace crl
