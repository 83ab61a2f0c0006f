#pragma once

// Small named instances used by tests, the acceptance suite and `selftest`.

#include <cstddef>
#include <span>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"

namespace crl::catalog {

/// One-state environment emitting observation `obs` after every action.
FsmEnvironment silent_env(const Interface& iface, std::size_t obs = 0);

/// One-state environment emitting every observation with equal probability.
FsmEnvironment coin_env(const Interface& iface);

/// Point mass on `even_action` at even history lengths, `odd_action` at odd ones.
FsmAgent alternating(const Interface& iface, std::size_t even_action, std::size_t odd_action,
                     std::string name = {});

/// Every agent whose output depends only on the last observation (or on h0),
/// with outputs drawn from `menu`: |menu|^(|O|+1) agents in lexicographic order
/// of their output tuples (h0 first, then o0, o1, ...).
std::vector<FsmAgent> memoryless_agents(const Interface& iface,
                                        std::span<const ActionDistribution> menu);

/// A = {a0, a1}, O = {o0}.
Interface binary_interface();

/// {h -> a0, h -> a1, parity (a0 at even |h|)}; pool-rank 2.
std::vector<FsmAgent> rank_example();

/// {h -> a0, h -> a1, a0-at-even, a0-at-odd}; two distinct minimal bases.
std::vector<FsmAgent> two_minimal_bases_example();

/// Pool {h -> a0, h -> a1, a0-at-even, a0-at-odd}.
std::vector<FsmAgent> constant_and_parity_pool();

/// Agent emitting `late` once the history has `delay` steps, `early` before.
FsmAgent switch_after(const Interface& iface, std::size_t delay, std::size_t early,
                      std::size_t late, std::string name = {});

/// Sometimes-reaches chain over A = {a1, a2}, O = {o1, o2} with a fair
/// observation coin: `first` takes a2 after `delay` steps only when the first
/// `delay` observations were all o1; `middle` takes a2 from step `delay` on;
/// `last` takes a2 from step `delay` on when the first `delay` observations
/// were all o2, otherwise only at odd lengths. first reaches {middle},
/// middle reaches {last}, yet first never reaches {last}.
struct ReachesChain {
  Interface iface;
  FsmEnvironment env;
  FsmAgent first;
  FsmAgent middle;
  FsmAgent last;
};
ReachesChain sometimes_reaches_chain(std::size_t delay = 10);

/// Never-reaches chain over A = {a1, a2, a3}: agents using only a1 and a3
/// never reach {h -> a2} and vice versa, yet each reaches its own set.
struct NeverChain {
  Interface iface;
  FsmEnvironment env;
  std::vector<FsmAgent> outer;  // plays both the first and the third set
  std::vector<FsmAgent> middle;
};
NeverChain never_reaches_chain();

/// Env-relative generation that is not transitive: first generates middle and
/// middle generates last in a one-observation environment, but first does not
/// generate last. `first[0]` plays a0 until it sees a1, then a1 forever.
struct GeneratesChain {
  Interface iface;
  FsmEnvironment env;
  std::vector<FsmAgent> first;
  std::vector<FsmAgent> middle;
  std::vector<FsmAgent> last;
};
GeneratesChain generates_chain();

}  // namespace crl::catalog
