#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crl/agent.hpp"
#include "crl/classify.hpp"
#include "crl/environment.hpp"
#include "crl/performance.hpp"

namespace crl {

struct MdpTransition {
  std::size_t next = 0;
  Rational probability;
  Rational reward;
};

/// Finite MDP with rewards on (s, a, s'). Entering a terminal state ends an
/// episode; embeddings send the process back to `start`.
struct TabularMdp {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  /// Indexed [state * |actions| + action].
  std::vector<std::vector<MdpTransition>> transitions;
  std::size_t start = 0;
  /// Empty, or one flag per state.
  std::vector<bool> terminal;
  std::string name;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_actions() const { return actions.size(); }
  const std::vector<MdpTransition>& row(std::size_t s, std::size_t a) const {
    return transitions[s * actions.size() + a];
  }
  bool is_terminal(std::size_t s) const { return !terminal.empty() && terminal[s]; }
};

/// Throws SpecError on malformed rows, ranges or probabilities.
void validate(const TabularMdp& mdp);

/// n MDPs over shared spaces; before every step the active one is replaced
/// with probability p_switch by one drawn uniformly from the others.
struct SwitchingSpec {
  std::vector<TabularMdp> mdps;
  Rational p_switch;
  std::size_t initial_index = 0;
};

/// Throws SpecError when the MDPs disagree on state or action names.
void validate(const SwitchingSpec& spec);

/// Hidden state (index, MDP state); the observation is the MDP state alone.
/// A step first resolves the switch, then transitions under the (possibly new)
/// active MDP. Entering a terminal state pays its reward and lands on start.
FsmEnvironment build_switching_env(const SwitchingSpec& spec);

/// Shared interface of a switching spec: actions, and MDP states as observations.
Interface switching_interface(const SwitchingSpec& spec);

// ---- gridworlds ----

struct GridLayout {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<bool> wall;
  std::size_t start = 0;
  std::size_t goal = 0;
  std::size_t hazard = 0;
};

/// Moves up, down, left, right; walls and edges block (the agent stays put).
/// Entering the goal pays +1, the hazard -1, all else 0; both are terminal.
TabularMdp gridworld_mdp(const GridLayout& layout, std::string name = {});

struct GridworldOptions {
  std::size_t width = 5;
  std::size_t height = 5;
  std::size_t count = 10;
  std::uint64_t seed = 0;
  std::size_t walls = 4;
  Rational p_switch = make_rational(1, 1000);
  /// Discount used to decide each variant's optimal policy.
  Rational gamma = make_rational(19, 20);
  std::size_t retry_budget = 2000;
};

struct GridworldSuite {
  SwitchingSpec spec;
  std::vector<GridLayout> layouts;
  /// Greedy optimal action per cell (lowest index among maximizers).
  std::vector<std::vector<std::size_t>> optimal_policies;
  /// Per variant: every non-terminal open cell has a single maximizing action.
  std::vector<bool> unique_optimal;
  std::size_t attempts = 0;
};

/// Random layouts, redrawn until the goal is reachable and the optimal
/// policies are pairwise distinct. Throws PreconditionError when the retry
/// budget runs out.
GridworldSuite build_gridworld_suite(const GridworldOptions& options);

struct PolicySolution {
  std::vector<std::size_t> policy;
  std::vector<Rational> values;
  bool unique = true;
};

/// Exact policy iteration; terminal states are absorbing with value 0.
PolicySolution solve_mdp(const TabularMdp& mdp, const Rational& gamma);

/// ASCII map: S start, G goal, X hazard, # wall, . open.
std::string describe(const GridLayout& layout);
/// Same map with the policy drawn as ^ v < > on open cells.
std::string describe(const GridLayout& layout, const std::vector<std::size_t>& policy);

// ---- continual supervised learning ----

struct CslPhase {
  /// Joint distribution over (input, label), indexed [x * |labels| + y].
  std::vector<Rational> distribution;
  /// Steps spent in the phase; nullopt for an unbounded final phase.
  std::optional<std::size_t> duration;
};

/// Inputs x arrive one per step; the label of the previous input arrives with
/// the next one. Labels double as the agent's actions.
struct CslSchedule {
  std::vector<std::string> inputs;
  std::vector<std::string> labels;
  std::vector<CslPhase> phases;
  /// Repeat the phases forever; every phase then needs a duration.
  bool cyclic = false;
};

void validate(const CslSchedule& schedule);

/// Actions are the labels; observations are "x|y" and "x|-" (no label yet).
Interface csl_interface(const CslSchedule& schedule);
/// Observation index of (input, label); label == nullopt is the ignore slot.
std::size_t csl_observation(const CslSchedule& schedule, std::size_t input,
                            std::optional<std::size_t> label);

/// State (clock position, pending label). Reward for action a against the
/// observation (x, y): +1 if a == y, -1 if not, 0 for the ignore slot.
FsmEnvironment build_csl_env(const CslSchedule& schedule);

/// Number of clock positions: one per step of every bounded phase, plus one
/// absorbing position for an unbounded final phase.
std::size_t csl_positions(const CslSchedule& schedule);
std::size_t csl_phase_at(const CslSchedule& schedule, std::size_t position);
std::size_t csl_advance(const CslSchedule& schedule, std::size_t position);

/// Fixed map from inputs to labels; outputs label 0 at h0.
FsmAgent csl_classifier(const CslSchedule& schedule, const std::vector<std::size_t>& labels,
                        std::string name = {});
/// Every map from inputs to labels, lexicographic over the label tuples.
std::vector<FsmAgent> csl_classifiers(const CslSchedule& schedule);
/// Predicts the most likely label of the current input under the phase that
/// generated it (lowest label on ties). `shift` offsets its clock.
FsmAgent csl_clock_agent(const CslSchedule& schedule, std::size_t shift = 0,
                         std::string name = {});
/// Behaves like csl_clock_agent for `steps` inputs, then like the classifier
/// the clock agent uses at position 0.
FsmAgent csl_converging_agent(const CslSchedule& schedule, std::size_t steps,
                              std::string name = {});
/// Predicts the label that arrived with the current observation.
FsmAgent csl_copy_last_label(const CslSchedule& schedule, std::string name = {});

/// Two inputs and labels; phases alternate y = x and y = not x every
/// `period` steps, forever.
CslSchedule csl_flip_schedule(std::size_t period);
/// One unbounded phase: uniform inputs, label y0 with probability 3/4.
CslSchedule csl_majority_schedule();

/// Basis = all classifiers; agents = classifiers, clock agent, clock agent
/// shifted by one period (cyclic schedules), converging agents after `period`
/// and twice `period` inputs, and the copy-last-label agent. Scored by the
/// average reward over `horizon` steps.
CrlInstance csl_instance(const CslSchedule& schedule, std::size_t period, std::size_t horizon);

// ---- two-phase switching toy ----

/// Two one-step bandit MDPs over states {win, lose} and actions {a0, a1}: in
/// phase A action a0 wins, in phase B a1 wins; a win pays 1. The phase flips
/// silently with probability p before each step; the process starts in A.
SwitchingSpec two_phase_bandit(Rational p_switch);

/// Win-stay lose-shift, starting with a0.
FsmAgent win_stay_lose_shift(const Interface& iface, std::string name = "win_stay_lose_shift");
/// Win-stay lose-shift for `steps` steps, then repeats its last action forever.
FsmAgent converging_wsls(const Interface& iface, std::size_t steps, std::string name = {});

struct ToyCrl {
  SwitchingSpec spec;
  CrlInstance instance;
};

/// Basis {always a0, always a1}; agents = basis, win-stay lose-shift,
/// converging variants for 1..`max_converge` steps, the eight memoryless
/// observation maps, and the agent generated by the model-based rule over
/// the basis with the true model. Discounted at 9/10.
ToyCrl two_phase_toy(Rational p_switch = make_rational(1, 10), std::size_t max_converge = 4);

}  // namespace crl
