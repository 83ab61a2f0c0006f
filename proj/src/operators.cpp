#include "crl/operators.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "crl/errors.hpp"
#include "crl/realizable.hpp"

namespace crl {

std::string Verdict::semantics() const {
  return horizon ? "bounded@" + std::to_string(*horizon) : "exact";
}

LearningRuleFsm::LearningRuleFsm(StateMachine machine, std::vector<std::size_t> select,
                                 std::string name)
    : machine_(std::move(machine)), select_(std::move(select)), name_(std::move(name)) {
  if (select_.size() != machine_.num_states()) {
    throw SpecError("learning rule needs one selection per state");
  }
}

LearningRuleFsm LearningRuleFsm::constant(std::size_t num_actions, std::size_t num_observations,
                                          std::size_t index, std::string name) {
  StateMachine m(num_actions, num_observations, 1, 0,
                 std::vector<std::size_t>(num_actions * num_observations, 0));
  return LearningRuleFsm(std::move(m), {index}, std::move(name));
}

std::size_t LearningRuleFsm::selection_after(const History& history) const {
  return select_[machine_.run(history)];
}

namespace {

std::vector<FsmAgent> with_actor(const FsmAgent& actor, std::span<const FsmAgent> rest) {
  std::vector<FsmAgent> all;
  all.reserve(rest.size() + 1);
  all.push_back(actor);
  all.insert(all.end(), rest.begin(), rest.end());
  return all;
}

bool agrees(std::span<const FsmAgent> participants, const ProductNode& node, std::size_t member) {
  return participants[0].output(node.machine_states[0]) ==
         participants[member].output(node.machine_states[member]);
}

/// First node (canonical order) within the bound where no basis member matches the actor.
std::optional<std::size_t> first_unmatched(const ProductGraph& graph,
                                           std::span<const FsmAgent> participants,
                                           std::optional<std::size_t> bound) {
  for (std::size_t n = 0; n < graph.size(); ++n) {
    const auto& node = graph.node(n);
    if (bound && node.depth > *bound) continue;
    bool matched = false;
    for (std::size_t m = 1; m < participants.size() && !matched; ++m) {
      matched = agrees(participants, node, m);
    }
    if (!matched) return n;
  }
  return std::nullopt;
}

void keep_shortest(std::optional<History>& best, const History& candidate) {
  if (!best || candidate < *best) best = candidate;
}

Verdict pointwise_generates(std::span<const FsmAgent> basis, std::span<const FsmAgent> lambda_set,
                            const FsmEnvironment* env) {
  if (basis.empty()) throw Error("an agent basis must be non-empty");
  Verdict v;
  v.holds = true;
  std::optional<std::size_t> horizon = min_horizon(basis);
  for (const auto& lambda : lambda_set) {
    auto participants = with_actor(lambda, basis);
    auto bound = min_horizon(participants);
    if (bound && (!horizon || *bound < *horizon)) horizon = bound;
    auto graph = env ? product_reachable(participants, *env) : product_uniform(participants);
    if (auto bad = first_unmatched(graph, participants, bound)) {
      v.holds = false;
      keep_shortest(v.witness, graph.history_to(*bad));
    }
  }
  v.horizon = horizon;
  return v;
}

}  // namespace

Verdict check_generates(std::span<const FsmAgent> basis, std::span<const FsmAgent> lambda_set,
                        const FsmEnvironment& env) {
  return pointwise_generates(basis, lambda_set, &env);
}

Verdict check_uniform_generates(std::span<const FsmAgent> basis,
                                std::span<const FsmAgent> lambda_set) {
  if (!basis.empty()) require_interface(lambda_set, basis[0].interface());
  return pointwise_generates(basis, lambda_set, nullptr);
}

Verdict check_sigma_generates(std::span<const FsmAgent> basis,
                              std::span<const LearningRuleFsm> rules,
                              std::span<const FsmAgent> lambda_set, const FsmEnvironment* env,
                              bool uniform) {
  if (basis.empty()) throw Error("an agent basis must be non-empty");
  if (rules.empty()) throw Error("at least one learning rule is required");
  if (!uniform && env == nullptr) throw Error("an environment is required unless uniform");
  const Interface& iface = basis[0].interface();
  require_interface(basis, iface);
  require_interface(lambda_set, iface);
  for (const auto& rule : rules) {
    if (rule.machine().num_actions() != iface.num_actions() ||
        rule.machine().num_observations() != iface.num_observations()) {
      throw InterfaceMismatch("learning rule '" + rule.name() + "' uses a different interface");
    }
    for (std::size_t s : rule.selections()) {
      if (s >= basis.size()) {
        throw PreconditionError("learning rule '" + rule.name() + "' selects index " +
                                std::to_string(s) + " outside the basis");
      }
    }
  }

  Verdict v;
  v.holds = true;
  v.horizon = min_horizon(basis);
  for (const auto& lambda : lambda_set) {
    std::optional<std::size_t> bound = v.horizon;
    if (lambda.horizon() && (!bound || *lambda.horizon() < *bound)) bound = lambda.horizon();
    v.horizon = bound;

    bool some_rule = false;
    std::optional<History> latest_failure;
    for (const auto& rule : rules) {
      ProductInputs in;
      in.num_actions = iface.num_actions();
      in.num_observations = iface.num_observations();
      in.machines.push_back(&lambda.machine());
      in.machines.push_back(&rule.machine());
      for (const auto& b : basis) in.machines.push_back(&b.machine());
      if (!uniform) {
        in.actor = &lambda;
        in.env = env;
      }
      auto graph = build_product(in);
      std::optional<std::size_t> bad;
      for (std::size_t n = 0; n < graph.size() && !bad; ++n) {
        const auto& node = graph.node(n);
        if (bound && node.depth > *bound) continue;
        std::size_t chosen = rule.select(node.machine_states[1]);
        if (lambda.output(node.machine_states[0]) !=
            basis[chosen].output(node.machine_states[2 + chosen])) {
          bad = n;
        }
      }
      if (!bad) {
        some_rule = true;
        break;
      }
      // Report the disagreement of whichever rule tracks lambda longest.
      History h = graph.history_to(*bad);
      if (!latest_failure || *latest_failure < h) latest_failure = h;
    }
    if (!some_rule) {
      v.holds = false;
      keep_shortest(v.witness, *latest_failure);
    }
  }
  return v;
}

std::string to_string(Modality m) {
  switch (m) {
    case Modality::sometimes: return "sometimes";
    case Modality::never: return "never";
    case Modality::always: return "always";
  }
  return "?";
}

Modality parse_modality(const std::string& text) {
  if (text == "sometimes") return Modality::sometimes;
  if (text == "never") return Modality::never;
  if (text == "always") return Modality::always;
  throw SpecError("unknown modality '" + text + "' (expected sometimes, never or always)");
}

std::vector<bool> agreement_set(const ProductGraph& graph, std::span<const FsmAgent> participants,
                                std::size_t member) {
  std::vector<bool> in(graph.size());
  std::deque<std::size_t> removed;
  for (std::size_t n = 0; n < graph.size(); ++n) {
    in[n] = agrees(participants, graph.node(n), member);
    if (!in[n]) removed.push_back(n);
  }
  auto preds = graph.predecessors();
  while (!removed.empty()) {
    std::size_t r = removed.front();
    removed.pop_front();
    for (std::size_t p : preds[r]) {
      if (in[p]) {
        in[p] = false;
        removed.push_back(p);
      }
    }
  }
  return in;
}

namespace {

Verdict exact_reaches(const ProductGraph& graph, std::span<const FsmAgent> participants,
                      Modality modality) {
  std::vector<bool> reached(graph.size(), false);
  for (std::size_t m = 1; m < participants.size(); ++m) {
    auto s = agreement_set(graph, participants, m);
    for (std::size_t n = 0; n < graph.size(); ++n) reached[n] = reached[n] || s[n];
  }

  Verdict v;
  if (modality != Modality::always) {
    auto first = std::find(reached.begin(), reached.end(), true);
    bool sometimes = first != reached.end();
    if (sometimes) v.witness = graph.history_to(static_cast<std::size_t>(first - reached.begin()));
    v.holds = modality == Modality::sometimes ? sometimes : !sometimes;
    return v;
  }

  // Peel nodes outside the reached region that cannot stay outside forever.
  std::vector<std::size_t> outside_edges(graph.size(), 0);
  std::vector<bool> alive(graph.size(), false);
  for (std::size_t n = 0; n < graph.size(); ++n) {
    if (reached[n]) continue;
    alive[n] = true;
    for (const auto& e : graph.edges(n)) {
      if (!reached[e.target]) ++outside_edges[n];
    }
  }
  auto preds = graph.predecessors();
  std::deque<std::size_t> dead;
  for (std::size_t n = 0; n < graph.size(); ++n) {
    if (alive[n] && outside_edges[n] == 0) dead.push_back(n);
  }
  while (!dead.empty()) {
    std::size_t d = dead.front();
    dead.pop_front();
    if (!alive[d]) continue;
    alive[d] = false;
    for (std::size_t p : preds[d]) {
      if (alive[p] && --outside_edges[p] == 0) dead.push_back(p);
    }
  }
  auto escape = std::find(alive.begin(), alive.end(), true);
  v.holds = escape == alive.end();
  if (!v.holds) v.witness = graph.history_to(static_cast<std::size_t>(escape - alive.begin()));
  return v;
}

Verdict bounded_reaches(const ProductGraph& graph, std::span<const FsmAgent> participants,
                        Modality modality, std::size_t horizon, std::size_t watch) {
  // layers[d]: nodes reachable by histories of length exactly d, in canonical order.
  std::vector<std::vector<std::size_t>> layers{{0}};
  std::vector<std::map<std::size_t, std::pair<std::size_t, Step>>> parent(1);
  for (std::size_t d = 0; d < horizon; ++d) {
    std::vector<std::size_t> next;
    std::map<std::size_t, std::pair<std::size_t, Step>> next_parent;
    for (std::size_t n : layers[d]) {
      for (const auto& e : graph.edges(n)) {
        if (next_parent.try_emplace(e.target, n, e.label).second) next.push_back(e.target);
      }
    }
    layers.push_back(std::move(next));
    parent.push_back(std::move(next_parent));
  }
  auto history_at = [&](std::size_t d, std::size_t n) {
    std::vector<Step> steps;
    for (std::size_t depth = d; depth > 0; --depth) {
      auto [p, label] = parent[depth].at(n);
      steps.push_back(label);
      n = p;
    }
    std::reverse(steps.begin(), steps.end());
    return History(std::move(steps));
  };

  // good[d][n]: some member agrees at n and on every continuation up to the horizon.
  std::vector<std::map<std::size_t, bool>> good(horizon + 1);
  std::vector<std::map<std::size_t, bool>> member_good(horizon + 1);
  for (std::size_t m = 1; m < participants.size(); ++m) {
    std::vector<std::map<std::size_t, bool>> g(horizon + 1);
    for (std::size_t d = horizon + 1; d-- > 0;) {
      for (std::size_t n : layers[d]) {
        bool ok = agrees(participants, graph.node(n), m);
        if (ok && d < horizon) {
          for (const auto& e : graph.edges(n)) {
            if (!g[d + 1].at(e.target)) {
              ok = false;
              break;
            }
          }
        }
        g[d][n] = ok;
        good[d][n] = good[d][n] || ok;
      }
    }
  }

  Verdict v;
  v.horizon = horizon;
  if (modality == Modality::always) {
    v.holds = true;
    for (std::size_t n : layers[watch]) {
      if (!good[watch][n]) {
        v.holds = false;
        v.witness = history_at(watch, n);
        break;
      }
    }
    return v;
  }
  bool sometimes = false;
  for (std::size_t d = 0; d <= watch && !sometimes; ++d) {
    for (std::size_t n : layers[d]) {
      if (good[d][n]) {
        sometimes = true;
        v.witness = history_at(d, n);
        break;
      }
    }
  }
  v.holds = modality == Modality::sometimes ? sometimes : !sometimes;
  return v;
}

}  // namespace

Verdict check_reaches(const FsmAgent& agent, std::span<const FsmAgent> basis,
                      const FsmEnvironment& env, Modality modality, ReachOptions options) {
  if (basis.empty()) throw Error("an agent basis must be non-empty");
  auto participants = with_actor(agent, basis);
  auto graph = product_reachable(participants, env);
  auto horizon = min_horizon(participants);
  if (!horizon) return exact_reaches(graph, participants, modality);
  std::size_t watch = options.watch_length.value_or(*horizon / 2);
  if (watch > *horizon) throw PreconditionError("watch length exceeds the horizon");
  return bounded_reaches(graph, participants, modality, *horizon, watch);
}

ActionDistribution distinct_from(const ActionDistribution& dist) {
  auto rotated = dist.rotated();
  if (!(rotated == dist)) return rotated;
  // Only the uniform distribution is rotation invariant; any point mass differs.
  return ActionDistribution::point_mass(dist.size(), 0);
}

std::vector<TableAgent> construct_generating_basis(const FsmAgent& agent,
                                                   const FsmEnvironment& env, std::size_t k,
                                                   std::size_t horizon) {
  if (k == 0) throw PreconditionError("k must be positive");
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  auto histories = realizable_histories(agent, env, horizon);
  if (histories.size() < k + 1) {
    throw PreconditionError("only " + std::to_string(histories.size()) +
                            " realizable histories up to horizon " + std::to_string(horizon) +
                            "; need at least " + std::to_string(k + 1));
  }
  std::map<History, std::size_t> index;
  for (std::size_t i = 0; i < histories.size(); ++i) index.emplace(histories[i], i);

  std::vector<TableAgent> basis;
  const std::string stem = agent.name().empty() ? "beta" : agent.name() + "_beta";
  for (std::size_t i = 0; i <= k; ++i) {
    auto rule = [&](const History& h) {
      const auto& out = run_agent(agent, h);
      auto it = index.find(h);
      if (it == index.end() || it->second % (k + 1) == i) return out;
      return distinct_from(out);
    };
    basis.emplace_back(agent.interface(), horizon, rule, run_agent(agent, History{}),
                       stem + std::to_string(i + 1));
  }
  return basis;
}

Verdict behaviorally_equal(const FsmAgent& a, const FsmAgent& b) {
  FsmAgent pair[] = {a, b};
  auto graph = product_uniform(pair);
  Verdict v;
  v.horizon = min_horizon(pair);
  auto bad = first_unmatched(graph, pair, v.horizon);
  v.holds = !bad;
  if (bad) v.witness = graph.history_to(*bad);
  return v;
}

Verdict equal_on_realizable(const FsmAgent& a, const FsmAgent& b, const FsmEnvironment& env) {
  FsmAgent pair[] = {a, b};
  auto graph = product_reachable(pair, env);
  Verdict v;
  v.horizon = min_horizon(pair);
  auto bad = first_unmatched(graph, pair, v.horizon);
  v.holds = !bad;
  if (bad) v.witness = graph.history_to(*bad);
  return v;
}

}  // namespace crl
