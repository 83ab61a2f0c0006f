#include "crl/catalog.hpp"

#include "crl/errors.hpp"

namespace crl::catalog {

namespace {

ActionDistribution pm(const Interface& iface, std::size_t a) {
  return ActionDistribution::point_mass(iface.num_actions(), a);
}

/// Transition table where the next state depends only on (state, observation).
std::vector<std::size_t> by_observation(const Interface& iface, std::size_t num_states,
                                        auto next) {
  const std::size_t A = iface.num_actions(), O = iface.num_observations();
  std::vector<std::size_t> t(num_states * A * O);
  for (std::size_t s = 0; s < num_states; ++s)
    for (std::size_t a = 0; a < A; ++a)
      for (std::size_t o = 0; o < O; ++o) t[(s * A + a) * O + o] = next(s, o);
  return t;
}

/// Counts `delay` steps while tracking whether every observation was `watched`,
/// then moves to `hit` or `miss`. States 2t + flag for t < delay.
std::vector<std::size_t> watch_prefix(const Interface& iface, std::size_t delay,
                                      std::size_t watched, std::size_t num_states,
                                      std::size_t hit, std::size_t miss, auto after) {
  return by_observation(iface, num_states, [&](std::size_t s, std::size_t o) -> std::size_t {
    if (s >= 2 * delay) return after(s);
    std::size_t t = s / 2;
    bool flag = (s % 2 == 1) && o == watched;
    if (t + 1 == delay) return flag ? hit : miss;
    return 2 * (t + 1) + (flag ? 1 : 0);
  });
}

}  // namespace

FsmEnvironment silent_env(const Interface& iface, std::size_t obs) {
  std::vector<std::vector<Outcome>> dyn(iface.num_actions(),
                                        {Outcome{0, obs, Rational(1), Rational(0)}});
  return FsmEnvironment(iface, 1, 0, std::move(dyn), "silent");
}

FsmEnvironment coin_env(const Interface& iface) {
  std::vector<std::vector<Outcome>> dyn(iface.num_actions());
  for (auto& row : dyn)
    for (std::size_t o = 0; o < iface.num_observations(); ++o)
      row.push_back(
          Outcome{0, o, make_rational(1, static_cast<long>(iface.num_observations())), Rational(0)});
  return FsmEnvironment(iface, 1, 0, std::move(dyn), "coin");
}

FsmAgent alternating(const Interface& iface, std::size_t even_action, std::size_t odd_action,
                     std::string name) {
  auto t = by_observation(iface, 2, [](std::size_t s, std::size_t) { return 1 - s; });
  return FsmAgent(iface, {pm(iface, even_action), pm(iface, odd_action)}, std::move(t), 0,
                  std::move(name));
}

std::vector<FsmAgent> memoryless_agents(const Interface& iface,
                                        std::span<const ActionDistribution> menu) {
  const std::size_t slots = iface.num_observations() + 1;
  auto t = by_observation(iface, slots, [](std::size_t, std::size_t o) { return o + 1; });
  std::vector<FsmAgent> out;
  std::vector<std::size_t> choice(slots, 0);
  while (true) {
    std::vector<ActionDistribution> outputs;
    std::string name = "memoryless[";
    for (std::size_t i = 0; i < slots; ++i) {
      outputs.push_back(menu[choice[i]]);
      name += (i ? "," : "") + (i == 0 ? std::string("h0") : iface.observation(i - 1)) + ":" +
              to_string(menu[choice[i]], iface);
    }
    out.emplace_back(iface, std::move(outputs), t, 0, name + "]");
    std::size_t i = slots;
    while (i-- > 0) {
      if (++choice[i] < menu.size()) break;
      choice[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

Interface binary_interface() { return Interface({"a0", "a1"}, {"o0"}); }

std::vector<FsmAgent> rank_example() {
  auto iface = binary_interface();
  return {FsmAgent::constant(iface, 0, "lambda0"), FsmAgent::constant(iface, 1, "lambda1"),
          alternating(iface, 0, 1, "lambda2")};
}

std::vector<FsmAgent> two_minimal_bases_example() {
  auto iface = binary_interface();
  return {FsmAgent::constant(iface, 0, "lambda0"), FsmAgent::constant(iface, 1, "lambda1"),
          alternating(iface, 0, 1, "lambda2"), alternating(iface, 1, 0, "lambda3")};
}

std::vector<FsmAgent> constant_and_parity_pool() {
  auto iface = binary_interface();
  return {FsmAgent::constant(iface, 0, "beta0"), FsmAgent::constant(iface, 1, "beta1"),
          alternating(iface, 0, 1, "beta2"), alternating(iface, 1, 0, "beta3")};
}

FsmAgent switch_after(const Interface& iface, std::size_t delay, std::size_t early,
                      std::size_t late, std::string name) {
  std::vector<ActionDistribution> out(delay, pm(iface, early));
  out.push_back(pm(iface, late));
  auto t = by_observation(iface, delay + 1,
                          [&](std::size_t s, std::size_t) { return std::min(s + 1, delay); });
  return FsmAgent(iface, std::move(out), std::move(t), 0, std::move(name));
}

ReachesChain sometimes_reaches_chain(std::size_t delay) {
  if (delay == 0) throw PreconditionError("delay must be positive");
  Interface iface({"a1", "a2"}, {"o1", "o2"});
  const std::size_t a1 = 0, a2 = 1, o1 = 0, o2 = 1;

  // first: counting states, then hit (a2 forever) or miss (a1 forever).
  const std::size_t hit = 2 * delay, miss = 2 * delay + 1;
  std::vector<ActionDistribution> first_out(2 * delay, pm(iface, a1));
  first_out.push_back(pm(iface, a2));
  first_out.push_back(pm(iface, a1));
  auto first_t = watch_prefix(iface, delay, o1, 2 * delay + 2, hit, miss,
                              [](std::size_t s) { return s; });
  FsmAgent first(iface, std::move(first_out), std::move(first_t), 1, "first");

  FsmAgent middle = switch_after(iface, delay, a1, a2, "middle");

  // last: hit -> a2 forever; otherwise a parity pair starting at length `delay`.
  const std::size_t even = 2 * delay + 1, odd = 2 * delay + 2;
  std::vector<ActionDistribution> last_out(2 * delay, pm(iface, a1));
  last_out.push_back(pm(iface, a2));
  last_out.push_back(pm(iface, a1));
  last_out.push_back(pm(iface, a2));
  auto last_t = watch_prefix(iface, delay, o2, 2 * delay + 3, hit, delay % 2 == 0 ? even : odd,
                             [&](std::size_t s) {
                               if (s == hit) return hit;
                               return s == even ? odd : even;
                             });
  FsmAgent last(iface, std::move(last_out), std::move(last_t), 1, "last");

  return ReachesChain{iface, coin_env(iface), std::move(first), std::move(middle), std::move(last)};
}

NeverChain never_reaches_chain() {
  Interface iface({"a1", "a2", "a3"}, {"o1"});
  std::vector<FsmAgent> outer{FsmAgent::constant(iface, 0, "always_a1"),
                              FsmAgent::constant(iface, 2, "always_a3"),
                              alternating(iface, 0, 2, "a1_a3_alternating")};
  std::vector<FsmAgent> middle{FsmAgent::constant(iface, 1, "always_a2")};
  return NeverChain{iface, silent_env(iface), std::move(outer), std::move(middle)};
}

GeneratesChain generates_chain() {
  auto iface = binary_interface();
  // Plays a0 until its own history contains a1, then a1 forever.
  std::vector<std::size_t> t = {0, 1, 1, 1};
  FsmAgent latch(iface, {pm(iface, 0), pm(iface, 1)}, std::move(t), 0, "latch");
  std::vector<FsmAgent> first{latch, FsmAgent::constant(iface, 1, "always_a1")};
  std::vector<FsmAgent> middle{FsmAgent::constant(iface, 0, "always_a0"),
                               FsmAgent::constant(iface, 1, "always_a1")};
  std::vector<FsmAgent> last{alternating(iface, 0, 1, "alternating")};
  return GeneratesChain{iface, silent_env(iface), std::move(first), std::move(middle),
                        std::move(last)};
}

}  // namespace crl::catalog
