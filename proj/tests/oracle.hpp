#pragma once

// Brute-force reference semantics used to cross-check the graph algorithms.
// Works directly on histories: outputs via run_agent, realizability via an
// explicit forward filter over environment states. No product graphs.

#include <optional>
#include <span>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"

namespace oracle {

using crl::FsmAgent;
using crl::FsmEnvironment;
using crl::History;
using crl::Rational;

struct Node {
  History h;
  std::vector<Rational> weight;  // unnormalised joint mass per env state
};

// Layers of realizable histories by length, canonical order within a layer.
inline std::vector<std::vector<Node>> realizable_layers(const FsmAgent& agent,
                                                        const FsmEnvironment& env,
                                                        std::size_t depth) {
  const auto& iface = env.interface();
  std::vector<Rational> start(env.num_states(), Rational(0));
  start[env.initial()] = 1;
  std::vector<std::vector<Node>> layers{{Node{History{}, start}}};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Node> next;
    for (const auto& node : layers[d]) {
      const auto& pi = crl::run_agent(agent, node.h);
      for (std::size_t a = 0; a < iface.num_actions(); ++a) {
        for (std::size_t o = 0; o < iface.num_observations(); ++o) {
          std::vector<Rational> w(env.num_states(), Rational(0));
          Rational total = 0;
          for (std::size_t s = 0; s < env.num_states(); ++s) {
            if (node.weight[s] == 0) continue;
            for (const auto& out : env.outcomes(s, a)) {
              if (out.observation != o) continue;
              Rational m = node.weight[s] * pi[a] * out.probability;
              w[out.next] += m;
              total += m;
            }
          }
          if (total > 0) next.push_back(Node{node.h.extended({a, o}), std::move(w)});
        }
      }
    }
    layers.push_back(std::move(next));
  }
  return layers;
}

inline std::vector<History> all_layers_flat(const std::vector<std::vector<Node>>& layers) {
  std::vector<History> out;
  for (const auto& layer : layers)
    for (const auto& n : layer) out.push_back(n.h);
  return out;
}

inline bool matched(std::span<const FsmAgent> basis, const FsmAgent& lambda, const History& h) {
  for (const auto& b : basis)
    if (crl::run_agent(b, h) == crl::run_agent(lambda, h)) return true;
  return false;
}

// First realizable history (canonical order, length <= depth) with no matching basis member.
inline std::optional<History> generates_failure(std::span<const FsmAgent> basis,
                                                std::span<const FsmAgent> lambdas,
                                                const FsmEnvironment& env, std::size_t depth) {
  std::optional<History> best;
  for (const auto& lambda : lambdas) {
    for (const auto& h : all_layers_flat(realizable_layers(lambda, env, depth))) {
      if (!matched(basis, lambda, h)) {
        if (!best || h < *best) best = h;
        break;
      }
    }
  }
  return best;
}

inline std::optional<History> uniform_failure(std::span<const FsmAgent> basis,
                                              std::span<const FsmAgent> lambdas,
                                              std::size_t depth) {
  const auto& iface = lambdas.front().interface();
  for (const auto& h : crl::all_histories(iface, depth)) {
    for (const auto& lambda : lambdas)
      if (!matched(basis, lambda, h)) return h;
  }
  return std::nullopt;
}

// Does member b agree with the agent on every realizable extension of h up to `window` steps?
inline bool agrees_onward(const FsmAgent& agent, const FsmAgent& b, const FsmEnvironment& env,
                          const Node& start, std::size_t window) {
  const auto& iface = env.interface();
  std::vector<Node> frontier{start};
  for (std::size_t d = 0;; ++d) {
    for (const auto& n : frontier)
      if (!(crl::run_agent(agent, n.h) == crl::run_agent(b, n.h))) return false;
    if (d == window) return true;
    std::vector<Node> next;
    for (const auto& node : frontier) {
      const auto& pi = crl::run_agent(agent, node.h);
      for (std::size_t a = 0; a < iface.num_actions(); ++a) {
        if (pi[a] == 0) continue;
        for (std::size_t o = 0; o < iface.num_observations(); ++o) {
          std::vector<Rational> w(env.num_states(), Rational(0));
          bool any = false;
          for (std::size_t s = 0; s < env.num_states(); ++s) {
            if (node.weight[s] == 0) continue;
            for (const auto& out : env.outcomes(s, a)) {
              if (out.observation != o) continue;
              w[out.next] += node.weight[s] * out.probability;
              any = true;
            }
          }
          if (any) next.push_back(Node{node.h.extended({a, o}), std::move(w)});
        }
      }
    }
    frontier = std::move(next);
  }
}

inline bool in_region(const FsmAgent& agent, std::span<const FsmAgent> basis,
                      const FsmEnvironment& env, const Node& n, std::size_t window) {
  for (const auto& b : basis)
    if (agrees_onward(agent, b, env, n, window)) return true;
  return false;
}

// Exists realizable h (|h| <= watch) and a member agreeing for `window` further steps.
inline bool sometimes_reaches(const FsmAgent& agent, std::span<const FsmAgent> basis,
                              const FsmEnvironment& env, std::size_t watch, std::size_t window) {
  for (const auto& layer : realizable_layers(agent, env, watch))
    for (const auto& n : layer)
      if (in_region(agent, basis, env, n, window)) return true;
  return false;
}

// For every realizable h (|h| <= watch) some t <= delay makes every length-t
// continuation land in the agreement region (checked `window` steps deep).
inline bool always_reaches(const FsmAgent& agent, std::span<const FsmAgent> basis,
                           const FsmEnvironment& env, std::size_t watch, std::size_t delay,
                           std::size_t window) {
  auto layers = realizable_layers(agent, env, watch + delay);
  for (std::size_t d = 0; d <= watch; ++d) {
    for (const auto& n : layers[d]) {
      bool some_t = false;
      for (std::size_t t = 0; t <= delay && !some_t; ++t) {
        bool all_in = true;
        for (const auto& m : layers[d + t]) {
          if (!m.h.has_prefix(n.h)) continue;
          if (!in_region(agent, basis, env, m, window)) {
            all_in = false;
            break;
          }
        }
        some_t = all_in;
      }
      if (!some_t) return false;
    }
  }
  return true;
}

}  // namespace oracle
