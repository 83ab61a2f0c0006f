#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "crl/agent.hpp"
#include "crl/environment.hpp"
#include "crl/errors.hpp"
#include "crl/product.hpp"
#include "crl/random_instances.hpp"
#include "crl/realizable.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace crl;

namespace {

Interface two_by_two() { return Interface::numbered(2, 2); }

// Parity agent: a0 at even history length, a1 at odd.
FsmAgent parity(const Interface& iface) {
  std::size_t n = iface.num_actions() * iface.num_observations();
  std::vector<std::size_t> t(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = 1;
    t[n + i] = 0;
  }
  return FsmAgent(iface,
                  {ActionDistribution::point_mass(iface.num_actions(), 0),
                   ActionDistribution::point_mass(iface.num_actions(), 1)},
                  t, 0, "parity");
}

FsmEnvironment coin_env(const Interface& iface) {
  std::vector<std::vector<Outcome>> dyn(iface.num_actions());
  for (auto& row : dyn) {
    for (std::size_t o = 0; o < iface.num_observations(); ++o) {
      row.push_back(Outcome{0, o, Rational(1, iface.num_observations()), Rational(0)});
    }
  }
  return FsmEnvironment(iface, 1, 0, dyn);
}

FsmEnvironment fixed_env(const Interface& iface, std::size_t obs = 0) {
  std::vector<std::vector<Outcome>> dyn(iface.num_actions(),
                                        {Outcome{0, obs, Rational(1), Rational(0)}});
  return FsmEnvironment(iface, 1, 0, dyn);
}

}  // namespace

TEST_CASE("rationals are exact and canonical") {
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(to_string(make_rational(6, 8)) == "3/4");
  CHECK(make_rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(2, 3) == 1);
  CHECK_THROWS_AS(parse_rational("1/0"), SpecError);
}

TEST_CASE("interface invariants") {
  CHECK_THROWS_AS(Interface({"a"}, {"o"}), SpecError);
  CHECK_THROWS_AS(Interface({"a", "a"}, {"o"}), SpecError);
  CHECK_THROWS_AS(Interface({"a", "b"}, {}), SpecError);
  auto iface = Interface({"left", "right"}, {"x"});
  CHECK(iface.action_index("right") == 1);
  CHECK_THROWS_AS(iface.action_index("up"), InterfaceMismatch);
}

TEST_CASE("history concatenation is associative with h0 as identity") {
  History a{{0, 1}}, b{{1, 0}, {1, 1}}, c{{0, 0}};
  CHECK(a.concat(b).concat(c) == a.concat(b.concat(c)));
  CHECK(History{}.concat(a) == a);
  CHECK(a.concat(History{}) == a);
  CHECK(History{} < a);
  CHECK(History{{0, 1}} < History{{1, 0}});
  CHECK(History{{1, 1}} < History{{0, 0}, {0, 0}});
}

TEST_CASE("distributions must sum to exactly one") {
  CHECK_THROWS_AS(ActionDistribution({Rational(1, 3), Rational(1, 3)}), SpecError);
  CHECK_THROWS_AS(ActionDistribution({Rational(2), Rational(-1)}), SpecError);
  auto d = ActionDistribution({Rational(1, 4), Rational(3, 4)});
  CHECK(d.rotated()[0] == Rational(3, 4));
  CHECK(ActionDistribution::uniform(3).rotated() == ActionDistribution::uniform(3));
}

TEST_CASE("run_agent on constant, parity and toggling agents") {
  auto iface = two_by_two();
  auto c = FsmAgent::constant(iface, 1);
  CHECK(run_agent(c, History{{0, 1}, {1, 1}}) == ActionDistribution::point_mass(2, 1));

  auto p = parity(iface);
  CHECK(run_agent(p, History{{0, 0}}) == ActionDistribution::point_mass(2, 1));
  CHECK(run_agent(p, History{{0, 0}, {1, 1}}) == ActionDistribution::point_mass(2, 0));

  // Two states; observation o1 toggles, o0 keeps.
  auto first = ActionDistribution({Rational(1, 3), Rational(2, 3)});
  auto second = ActionDistribution::point_mass(2, 0);
  std::vector<std::size_t> t = {0, 1, 0, 1,   // state 0: (a0,o0)(a0,o1)(a1,o0)(a1,o1)
                                1, 0, 1, 0};  // state 1
  FsmAgent toggle(iface, {first, second}, t, 0, "toggle");
  // Hand-unrolled table to depth 2.
  CHECK(run_agent(toggle, History{}) == first);
  CHECK(run_agent(toggle, History{{1, 1}}) == second);
  CHECK(run_agent(toggle, History{{1, 0}}) == first);
  CHECK(run_agent(toggle, History{{1, 1}, {0, 1}}) == first);
  CHECK(run_agent(toggle, History{{1, 1}, {0, 0}}) == second);

  CHECK_THROWS_AS(run_agent(c, History{{2, 0}}), InterfaceMismatch);
  CHECK_THROWS_AS(run_agent(c, History{{0, 5}}), InterfaceMismatch);
}

TEST_CASE("run_agent agrees with the fold of step on random machines") {
  std::mt19937_64 rng(7);
  auto iface = Interface::numbered(2, 2);
  auto menu = default_menu(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto agent = random_agent(iface, 3, rng, menu);
    for (const auto& h : all_histories(iface, 4)) {
      std::size_t s = agent.initial();
      for (const auto& step : h) s = agent.step(s, step.action, step.observation);
      CHECK(run_agent(agent, h) == agent.output(s));
    }
  }
}

TEST_CASE("table agents return the fallback beyond the horizon and compile faithfully") {
  auto iface = two_by_two();
  auto rule = [](const History& h) {
    return ActionDistribution::point_mass(2, h.size() % 2 == 0 ? 0 : 1);
  };
  auto fallback = ActionDistribution::uniform(2);
  TableAgent table(iface, 2, rule, fallback, "t");
  CHECK(table.histories().size() == 1 + 4 + 16);
  CHECK(table(History{{0, 0}}) == ActionDistribution::point_mass(2, 1));
  CHECK(table(History{{0, 0}, {0, 0}, {0, 0}}) == fallback);
  auto fsm = table.compile();
  REQUIRE(fsm.horizon());
  CHECK(*fsm.horizon() == 2);
  for (const auto& h : all_histories(iface, 4)) CHECK(run_agent(fsm, h) == run_agent(table, h));
}

TEST_CASE("environment rows must sum to one") {
  auto iface = two_by_two();
  std::vector<std::vector<Outcome>> bad(2, {Outcome{0, 0, Rational(1, 2), Rational(0)}});
  CHECK_THROWS_AS(FsmEnvironment(iface, 1, 0, bad), SpecError);
  std::vector<std::vector<Outcome>> out_of_range(2, {Outcome{3, 0, Rational(1), Rational(0)}});
  CHECK_THROWS_AS(FsmEnvironment(iface, 1, 0, out_of_range), SpecError);
}

TEST_CASE("realizable histories: examples") {
  auto iface = two_by_two();
  SUBCASE("deterministic pair has one history per length") {
    auto hs = realizable_histories(FsmAgent::constant(iface, 0), fixed_env(iface), 2);
    CHECK(hs == std::vector<History>{History{}, History{{0, 0}}, History{{0, 0}, {0, 0}}});
  }
  SUBCASE("zero-probability actions never appear") {
    auto hs = realizable_histories(FsmAgent::constant(iface, 0), coin_env(iface), 3);
    for (const auto& h : hs)
      for (const auto& s : h) CHECK(s.action == 0);
  }
  SUBCASE("uniform agent and fair coin at T=1") {
    auto uniform = FsmAgent::constant(iface, ActionDistribution::uniform(2));
    auto hs = realizable_histories(uniform, coin_env(iface), 1);
    // Oracle: h0 plus every (a, o) pair.
    std::vector<History> expected{History{}};
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t o = 0; o < 2; ++o) expected.push_back(History{{a, o}});
    CHECK(hs == expected);
  }
}

TEST_CASE("realizable suffixes") {
  auto iface = two_by_two();
  auto uniform = FsmAgent::constant(iface, ActionDistribution::uniform(2));
  auto env = coin_env(iface);
  CHECK(realizable_suffixes(uniform, env, History{}, 2) == realizable_histories(uniform, env, 2));

  auto det = FsmAgent::constant(iface, 1);
  auto fixed = fixed_env(iface, 1);
  History h{{1, 1}, {1, 1}};
  CHECK(realizable_suffixes(det, fixed, h, 3) == std::vector<History>{History{}, History{{1, 1}}});

  // Cross-check against filtering the full realizable set by prefix.
  History prefix{{0, 1}};
  std::vector<History> filtered;
  for (const auto& full : realizable_histories(uniform, env, 3)) {
    if (full.has_prefix(prefix)) filtered.push_back(full.suffix_after(prefix.size()));
  }
  auto got = realizable_suffixes(uniform, env, prefix, 3);
  std::sort(filtered.begin(), filtered.end());
  CHECK(got == filtered);

  CHECK_THROWS_AS(realizable_suffixes(det, fixed, History{{1, 1}, {0, 1}}, 3), PreconditionError);
  try {
    realizable_suffixes(det, fixed, History{{1, 1}, {0, 1}}, 3);
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("product graph examples") {
  auto iface = two_by_two();
  SUBCASE("constant agent in a one-state env") {
    FsmAgent a[] = {FsmAgent::constant(iface, 0)};
    auto g = product_reachable(a, coin_env(iface));
    CHECK(g.size() == 1);
    CHECK(g.edges(0).size() == 1 * 2);
    for (const auto& e : g.edges(0)) CHECK(e.target == 0);
  }
  SUBCASE("no edge uses an action the actor never takes") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
      FsmAgent a[] = {FsmAgent::constant(iface, 1), random_agent(iface, 2, rng, default_menu(2))};
      auto g = product_reachable(a, random_environment(iface, 2, rng));
      for (std::size_t n = 0; n < g.size(); ++n)
        for (const auto& e : g.edges(n)) CHECK(e.label.action == 1);
    }
  }
  SUBCASE("node count matches an exhaustive joint-state enumeration") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
      FsmAgent a[] = {random_agent(iface, 2, rng, default_menu(2)),
                      random_agent(iface, 2, rng, default_menu(2))};
      auto env = random_environment(iface, 2, rng);
      auto g = product_reachable(a, env);
      // Oracle: distinct (actor, tracker, belief-support) triples over histories to depth 10.
      std::set<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>> seen;
      for (const auto& layer : oracle::realizable_layers(a[0], env, 10)) {
        for (const auto& n : layer) {
          std::vector<std::size_t> support;
          for (std::size_t s = 0; s < n.weight.size(); ++s)
            if (n.weight[s] > 0) support.push_back(s);
          seen.emplace(a[0].state_after(n.h), a[1].state_after(n.h), support);
        }
      }
      CHECK(g.size() == seen.size());
      CHECK(g.size() <= 2 * 2 * 3);
    }
  }
  SUBCASE("empty participant list is rejected") {
    CHECK_THROWS(product_reachable(std::span<const FsmAgent>{}, coin_env(iface)));
  }
}

TEST_CASE("realizable sets are prefix-closed and match direct enumeration") {
  std::mt19937_64 rng(5);
  auto iface = Interface::numbered(2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    auto agent = random_agent(iface, 2, rng, default_menu(2));
    auto env = random_environment(iface, 2, rng);
    auto hs = realizable_histories(agent, env, 3);
    std::set<History> set(hs.begin(), hs.end());
    for (const auto& h : hs) CHECK(set.count(h.prefix(h.size() ? h.size() - 1 : 0)) == 1);
    auto direct = oracle::all_layers_flat(oracle::realizable_layers(agent, env, 3));
    if (direct.size() <= 200) CHECK(hs == direct);
  }
}
