#include "crl/product.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "crl/errors.hpp"

namespace crl {

std::optional<std::size_t> ProductGraph::successor(std::size_t id, Step label) const {
  for (const auto& e : edges_[id]) {
    if (e.label == label) return e.target;
  }
  return std::nullopt;
}

History ProductGraph::history_to(std::size_t id) const {
  std::vector<Step> steps;
  for (std::size_t cur = id; nodes_[cur].parent; cur = *nodes_[cur].parent) {
    steps.push_back(nodes_[cur].via);
  }
  std::reverse(steps.begin(), steps.end());
  return History(std::move(steps));
}

std::vector<std::vector<std::size_t>> ProductGraph::predecessors() const {
  std::vector<std::vector<std::size_t>> preds(nodes_.size());
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    for (const auto& e : edges_[n]) preds[e.target].push_back(n);
  }
  return preds;
}

std::size_t ProductGraph::max_depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::optional<std::size_t> ProductGraph::walk(const History& history) const {
  std::size_t cur = 0;
  for (const auto& step : history) {
    auto next = successor(cur, step);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

struct ProductBuilder {
  static ProductGraph build(const ProductInputs& in) {
    if (in.actor && (in.machines.empty() || in.machines[0] != &in.actor->machine())) {
      throw Error("the acting agent must be the first machine of a product");
    }
    using Key = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;
    ProductGraph g;
    std::map<Key, std::size_t> index;

    auto intern = [&](ProductNode node) -> std::pair<std::size_t, bool> {
      Key key{node.machine_states, node.env_support};
      auto [it, inserted] = index.try_emplace(std::move(key), g.nodes_.size());
      if (inserted) {
        g.nodes_.push_back(std::move(node));
        g.edges_.emplace_back();
      }
      return {it->second, inserted};
    };

    ProductNode root;
    for (const auto* m : in.machines) root.machine_states.push_back(m->initial());
    if (in.env) root.env_support = {in.env->initial()};
    intern(std::move(root));

    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      std::size_t id = queue.front();
      queue.pop_front();
      for (std::size_t a = 0; a < in.num_actions; ++a) {
        Rational p_action = 1;
        if (in.actor) {
          p_action = in.actor->output(g.nodes_[id].machine_states[0])[a];
          if (p_action == 0) continue;
        }
        // Observation-indexed successor supports for this action.
        std::vector<std::vector<std::size_t>> supports(in.num_observations);
        std::vector<bool> possible(in.num_observations, in.env == nullptr);
        if (in.env) {
          for (std::size_t s : g.nodes_[id].env_support) {
            for (const auto& out : in.env->outcomes(s, a)) {
              possible[out.observation] = true;
              supports[out.observation].push_back(out.next);
            }
          }
        }
        for (std::size_t o = 0; o < in.num_observations; ++o) {
          if (!possible[o]) continue;
          auto& support = supports[o];
          std::sort(support.begin(), support.end());
          support.erase(std::unique(support.begin(), support.end()), support.end());
          ProductNode child;
          child.machine_states.reserve(in.machines.size());
          for (std::size_t k = 0; k < in.machines.size(); ++k) {
            child.machine_states.push_back(
                in.machines[k]->step(g.nodes_[id].machine_states[k], a, o));
          }
          child.env_support = std::move(support);
          child.depth = g.nodes_[id].depth + 1;
          child.parent = id;
          child.via = Step{a, o};
          auto [target, fresh] = intern(std::move(child));
          if (fresh) queue.push_back(target);
          g.edges_[id].push_back(ProductEdge{Step{a, o}, p_action, target});
        }
      }
    }
    return g;
  }
};

ProductGraph build_product(const ProductInputs& inputs) { return ProductBuilder::build(inputs); }

void require_interface(std::span<const FsmAgent> agents, const Interface& iface) {
  for (const auto& agent : agents) {
    if (!(agent.interface() == iface)) {
      throw InterfaceMismatch("agent '" + agent.name() + "' uses a different interface");
    }
  }
}

ProductGraph product_reachable(std::span<const FsmAgent> participants, const FsmEnvironment& env) {
  if (participants.empty()) throw Error("a product needs at least one agent");
  require_interface(participants, env.interface());
  ProductInputs in;
  in.num_actions = env.interface().num_actions();
  in.num_observations = env.interface().num_observations();
  for (const auto& agent : participants) in.machines.push_back(&agent.machine());
  in.actor = &participants[0];
  in.env = &env;
  return build_product(in);
}

ProductGraph product_uniform(std::span<const FsmAgent> participants) {
  if (participants.empty()) throw Error("a product needs at least one agent");
  require_interface(participants, participants[0].interface());
  ProductInputs in;
  in.num_actions = participants[0].interface().num_actions();
  in.num_observations = participants[0].interface().num_observations();
  for (const auto& agent : participants) in.machines.push_back(&agent.machine());
  return build_product(in);
}

std::optional<std::size_t> min_horizon(std::span<const FsmAgent> agents) {
  std::optional<std::size_t> best;
  for (const auto& agent : agents) {
    if (agent.horizon() && (!best || *agent.horizon() < *best)) best = agent.horizon();
  }
  return best;
}

}  // namespace crl
