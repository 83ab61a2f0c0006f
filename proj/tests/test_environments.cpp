#include <functional>
#include <map>
#include <set>

#include "crl/classify.hpp"
#include "crl/environments.hpp"
#include "crl/errors.hpp"
#include "crl/linear.hpp"
#include "doctest.h"

using namespace crl;

namespace {

/// A single MDP as an environment, terminals teleporting to start.
FsmEnvironment embed(const TabularMdp& mdp) {
  std::vector<std::vector<Outcome>> dynamics;
  for (std::size_t s = 0; s < mdp.num_states(); ++s) {
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      std::vector<Outcome> row;
      for (const auto& t : mdp.row(s, a)) {
        std::size_t lands = mdp.is_terminal(t.next) ? mdp.start : t.next;
        row.push_back({lands, lands, t.probability, t.reward});
      }
      dynamics.push_back(std::move(row));
    }
  }
  return FsmEnvironment(Interface(mdp.actions, mdp.states), mdp.num_states(), mdp.start,
                        std::move(dynamics));
}

/// `relation` must be a bisimulation: related states give identical
/// distributions over (observation, reward, related successor).
bool is_bisimulation(const FsmEnvironment& x, const FsmEnvironment& y,
                     const std::map<std::size_t, std::size_t>& relation) {
  if (relation.at(x.initial()) != y.initial()) return false;
  for (const auto& [sx, sy] : relation) {
    for (std::size_t a = 0; a < x.interface().num_actions(); ++a) {
      std::map<std::tuple<std::size_t, Rational, std::size_t>, Rational> dx, dy;
      for (const auto& o : x.outcomes(sx, a)) {
        if (!relation.count(o.next)) return false;
        dx[{o.observation, o.reward, relation.at(o.next)}] += o.probability;
      }
      for (const auto& o : y.outcomes(sy, a)) dy[{o.observation, o.reward, o.next}] += o.probability;
      if (dx != dy) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("switching with zero probability is the first MDP") {
  GridworldOptions opt;
  opt.count = 3;
  auto suite = build_gridworld_suite(opt);
  suite.spec.p_switch = 0;
  auto env = build_switching_env(suite.spec);
  auto plain = embed(suite.spec.mdps[0]);
  const std::size_t S = plain.num_states();
  std::map<std::size_t, std::size_t> relation;
  for (std::size_t s = 0; s < S; ++s) relation[s] = s;
  CHECK(is_bisimulation(env, plain, relation));

  suite.spec.p_switch = make_rational(1, 1000);
  CHECK_FALSE(is_bisimulation(build_switching_env(suite.spec), plain, relation));
}

TEST_CASE("first-step observations follow the mixture formula") {
  GridworldOptions opt;
  opt.count = 3;
  opt.width = 3;
  opt.height = 3;
  opt.walls = 1;
  auto suite = build_gridworld_suite(opt);
  suite.spec.p_switch = make_rational(1, 5);
  auto env = build_switching_env(suite.spec);
  const std::size_t n = 3, S = suite.spec.mdps[0].num_states();
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t o = 0; o < S; ++o) {
      Rational mixture = 0;
      for (std::size_t i = 0; i < n; ++i) {
        Rational weight = i == 0 ? Rational(1 - suite.spec.p_switch) : Rational(suite.spec.p_switch / 2);
        const auto& mdp = suite.spec.mdps[i];
        for (const auto& t : mdp.row(mdp.start, a)) {
          std::size_t lands = mdp.is_terminal(t.next) ? mdp.start : t.next;
          if (lands == o) mixture += weight * t.probability;
        }
      }
      CHECK(observation_probability(env, initial_belief(env), a, o) == mixture);
    }
  }
}

TEST_CASE("the hidden index is not observable") {
  auto spec = two_phase_bandit(make_rational(1, 1000));
  auto env = build_switching_env(spec);
  CHECK(env.interface().observations() == spec.mdps[0].states);
  const std::size_t S = spec.mdps[0].num_states();
  std::set<std::size_t> emitted[2];
  for (std::size_t st = 0; st < env.num_states(); ++st) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (const auto& o : env.outcomes(st, a)) {
        CHECK(o.observation == o.next % S);
        emitted[st / S].insert(o.observation);
      }
    }
  }
  CHECK(emitted[0] == emitted[1]);
}

TEST_CASE("switching spec validation") {
  auto spec = two_phase_bandit(make_rational(1, 2));
  spec.p_switch = make_rational(3, 2);
  CHECK_THROWS_AS(build_switching_env(spec), SpecError);
  spec.p_switch = 0;
  spec.mdps[1].states = {"w", "l"};
  CHECK_THROWS_AS(build_switching_env(spec), SpecError);
  spec = two_phase_bandit(0);
  spec.mdps[0].transitions[0][0].probability = make_rational(1, 2);
  CHECK_THROWS_AS(build_switching_env(spec), SpecError);
}

TEST_CASE("gridworld suite") {
  SUBCASE("default suite of ten") {
    auto suite = build_gridworld_suite({});
    REQUIRE(suite.spec.mdps.size() == 10);
    for (const auto& mdp : suite.spec.mdps) {
      CHECK(mdp.states == suite.spec.mdps[0].states);
      CHECK(mdp.actions == suite.spec.mdps[0].actions);
    }
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = i + 1; j < 10; ++j) {
        CHECK(suite.optimal_policies[i] != suite.optimal_policies[j]);
      }
    }
    // Float value iteration agrees that each stored policy is greedy-optimal.
    for (std::size_t i = 0; i < 10; ++i) {
      const auto& mdp = suite.spec.mdps[i];
      std::vector<double> v(mdp.num_states(), 0.0);
      auto q = [&](std::size_t s, std::size_t a) {
        double total = 0;
        for (const auto& t : mdp.row(s, a)) {
          total += t.probability.get_d() *
                   (t.reward.get_d() + (mdp.is_terminal(t.next) ? 0.0 : 0.95 * v[t.next]));
        }
        return total;
      };
      for (int sweep = 0; sweep < 2000; ++sweep) {
        for (std::size_t s = 0; s < mdp.num_states(); ++s) {
          if (mdp.is_terminal(s)) continue;
          double best = q(s, 0);
          for (std::size_t a = 1; a < 4; ++a) best = std::max(best, q(s, a));
          v[s] = best;
        }
      }
      for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        if (mdp.is_terminal(s)) continue;
        double best = q(s, 0);
        for (std::size_t a = 1; a < 4; ++a) best = std::max(best, q(s, a));
        CHECK(q(s, suite.optimal_policies[i][s]) == doctest::Approx(best).epsilon(1e-9));
      }
      // The start cell reaches the goal, so its optimal value is positive.
      CHECK(v[mdp.start] > 0);
    }
    auto again = build_gridworld_suite({});
    CHECK(again.optimal_policies == suite.optimal_policies);
  }
  SUBCASE("singleton suite") {
    GridworldOptions opt;
    opt.count = 1;
    CHECK(build_gridworld_suite(opt).spec.mdps.size() == 1);
  }
  SUBCASE("impossible distinctness exhausts the budget") {
    GridworldOptions opt;
    opt.width = 2;
    opt.height = 2;
    opt.walls = 0;
    opt.count = 10;
    opt.retry_budget = 200;
    CHECK_THROWS_AS(build_gridworld_suite(opt), PreconditionError);
  }
  SUBCASE("maps") {
    GridLayout g{3, 3, {false, true, false, false, false, false, false, false, false}, 0, 2, 7};
    CHECK(describe(g) == "S#G\n...\n.X.\n");
    auto sol = solve_mdp(gridworld_mdp(g), make_rational(19, 20));
    CHECK(sol.policy[0] == 1);
    CHECK(sol.policy[3] == 3);
    CHECK(sol.policy[5] == 0);
    CHECK(describe(g, sol.policy) == "v#G\n>>^\n^X^\n");
  }
}

TEST_CASE("linear solver rejects singular systems") {
  RationalMatrix m(2);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 0) = 2;
  m(1, 1) = 4;
  CHECK_THROWS_AS(solve_linear(m, {Rational(1), Rational(2)}), Error);
}

namespace {

/// Reward of action `a` against observation name "x|y": +1 if a names y,
/// -1 if it names another label, 0 for "x|-".
int reward_by_name(const std::string& action, const std::string& observation) {
  std::string label = observation.substr(observation.find('|') + 1);
  if (label == "-") return 0;
  return label == action ? 1 : -1;
}

}  // namespace

TEST_CASE("continual supervised rewards match the labeling rule to depth 5") {
  for (const auto& schedule : {csl_flip_schedule(2), csl_majority_schedule()}) {
    auto env = build_csl_env(schedule);
    const Interface& iface = env.interface();
    std::size_t paths = 0;
    std::function<void(std::size_t, std::size_t, std::optional<std::size_t>)> walk =
        [&](std::size_t state, std::size_t depth, std::optional<std::size_t> owed) {
          if (depth == 5) return;
          for (std::size_t a = 0; a < iface.num_actions(); ++a) {
            for (const auto& out : env.outcomes(state, a)) {
              ++paths;
              const auto& name = iface.observation(out.observation);
              REQUIRE(out.reward == reward_by_name(iface.action(a), name));
              // The label shown is the one drawn with the previous input.
              std::string shown = name.substr(name.find('|') + 1);
              REQUIRE(shown == (owed ? schedule.labels[*owed] : std::string("-")));
              walk(out.next, depth + 1, out.next % (schedule.labels.size() + 1));
            }
          }
        };
    walk(env.initial(), 0, std::nullopt);
    CHECK(paths > 100);
  }
}

TEST_CASE("a fixed classifier earns +1 on a deterministic stationary stream") {
  CslSchedule s;
  s.inputs = {"x0", "x1", "x2"};
  s.labels = {"y0", "y1"};
  // y = f(x) with f = (y1, y0, y1), inputs uniform.
  Rational third = make_rational(1, 3);
  s.phases.push_back({{0, third, third, 0, 0, third}, std::nullopt});
  auto env = build_csl_env(s);
  auto f = csl_classifier(s, {1, 0, 1});
  // First reward is against the ignore slot.
  CHECK(compute_value(f, env, PerformanceSpec::finite_horizon_average(6)) == make_rational(5, 6));
  CHECK(compute_value(csl_clock_agent(s), env, PerformanceSpec::finite_horizon_average(6)) ==
        make_rational(5, 6));
  CHECK(compute_value(csl_classifier(s, {0, 0, 0}), env,
                      PerformanceSpec::finite_horizon_average(7)) == make_rational(-2, 7));
  CHECK(csl_classifiers(s).size() == 8);
}

TEST_CASE("schedule validation") {
  CslSchedule s = csl_majority_schedule();
  s.phases[0].distribution[0] = 0;
  CHECK_THROWS_AS(build_csl_env(s), SpecError);
  s = csl_flip_schedule(2);
  s.cyclic = false;
  CHECK_THROWS_AS(build_csl_env(s), SpecError);
  s = csl_majority_schedule();
  CHECK_THROWS_AS(csl_classifier(s, {0, 2}), InterfaceMismatch);
}

TEST_CASE("label flipping is CRL, a stable majority is not") {
  auto flip = csl_instance(csl_flip_schedule(2), 2, 8);
  auto report = classify_crl(flip);
  CHECK(report.basis_generates.holds);
  CHECK(report.is_crl);
  REQUIRE(report.optimal.size() == 1);
  CHECK(flip.agents[report.optimal[0]].name() == "clock");
  CHECK(report.values[report.optimal[0]] == make_rational(7, 8));
  for (std::size_t i = 0; i < flip.basis.size(); ++i) CHECK(report.values[i] < make_rational(7, 8));

  auto stable = csl_instance(csl_majority_schedule(), 2, 8);
  auto settled = classify_crl(stable);
  CHECK_FALSE(settled.is_crl);
  bool basis_member_optimal = false;
  for (std::size_t i : settled.optimal) basis_member_optimal |= i < stable.basis.size();
  CHECK(basis_member_optimal);
}
