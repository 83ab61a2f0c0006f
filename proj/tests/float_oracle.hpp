#pragma once

// Floating-point value iteration over (agent state, env state) pairs, written
// independently of the exact solvers it checks.

#include <cmath>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"

namespace oracle {

/// Discounted value from the initial pair by value iteration to a fixed point.
inline double discounted_value(const crl::FsmAgent& agent, const crl::FsmEnvironment& env,
                               double gamma) {
  const std::size_t Q = agent.num_states(), S = env.num_states();
  const std::size_t A = env.interface().num_actions();
  std::vector<double> v(Q * S, 0.0), next(Q * S);
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double change = 0;
    for (std::size_t q = 0; q < Q; ++q) {
      for (std::size_t s = 0; s < S; ++s) {
        double total = 0;
        for (std::size_t a = 0; a < A; ++a) {
          double pa = agent.output(q)[a].get_d();
          if (pa == 0) continue;
          for (const auto& out : env.outcomes(s, a)) {
            std::size_t q2 = agent.step(q, a, out.observation);
            total += pa * out.probability.get_d() *
                     (out.reward.get_d() + gamma * v[q2 * S + out.next]);
          }
        }
        next[q * S + s] = total;
        change = std::max(change, std::abs(total - v[q * S + s]));
      }
    }
    v.swap(next);
    if (change < 1e-13) break;
  }
  return v[agent.initial() * S + env.initial()];
}

}  // namespace oracle
