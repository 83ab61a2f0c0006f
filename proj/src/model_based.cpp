#include "crl/model_based.hpp"

#include <deque>
#include <map>
#include <set>

#include "crl/errors.hpp"
#include "crl/product.hpp"

namespace crl {

namespace {

/// Posterior after (a, o), or the unconditioned prediction when o has zero likelihood.
Belief advance(const FsmEnvironment& model, const Belief& belief, std::size_t a, std::size_t o) {
  if (auto next = update_belief(model, belief, a, o)) return std::move(*next);
  Belief predicted(model.num_states(), Rational(0));
  for (std::size_t s = 0; s < belief.size(); ++s) {
    if (belief[s] == 0) continue;
    for (const auto& out : model.outcomes(s, a)) predicted[out.next] += belief[s] * out.probability;
  }
  return predicted;
}

}  // namespace

FsmAgent ModelBasedRule::generated_agent(std::string name) const {
  std::vector<ActionDistribution> outputs;
  for (std::size_t s = 0; s < num_states(); ++s) {
    std::size_t chosen = rule_.select(s);
    outputs.push_back(basis_[chosen].output(basis_states_[s][chosen]));
  }
  return FsmAgent(basis_[0].interface(), std::move(outputs), rule_.machine().transitions(), 0,
                  std::move(name));
}

ModelBasedRule make_model_based_rule(std::vector<FsmAgent> basis, const FsmEnvironment& model,
                                     const PerformanceSpec& perf, std::size_t max_states) {
  if (basis.empty()) throw Error("an agent basis must be non-empty");
  const Interface& iface = model.interface();
  require_interface(basis, iface);
  const std::size_t A = iface.num_actions(), O = iface.num_observations();

  ValueOptions all;
  all.all_pairs = true;
  std::vector<ValueTable> tables;
  for (const auto& b : basis) tables.push_back(value_table(b, model, perf, all));

  using Key = std::pair<Belief, std::vector<std::size_t>>;
  std::map<Key, std::size_t> index;
  std::vector<Belief> beliefs;
  std::vector<std::vector<std::size_t>> states;
  std::vector<std::size_t> transitions;
  std::deque<std::size_t> queue;

  auto intern = [&](Belief b, std::vector<std::size_t> q) {
    auto [it, fresh] = index.try_emplace(Key{b, q}, beliefs.size());
    if (fresh) {
      if (beliefs.size() >= max_states) {
        throw PreconditionError("model-based rule exceeds " + std::to_string(max_states) +
                                " states; the model's posterior space is too large");
      }
      beliefs.push_back(std::move(b));
      states.push_back(std::move(q));
      queue.push_back(it->second);
    }
    return it->second;
  };

  std::vector<std::size_t> start;
  for (const auto& b : basis) start.push_back(b.initial());
  intern(initial_belief(model), start);
  while (!queue.empty()) {
    std::size_t id = queue.front();
    queue.pop_front();
    transitions.resize(beliefs.size() * A * O);
    for (std::size_t a = 0; a < A; ++a) {
      for (std::size_t o = 0; o < O; ++o) {
        Belief next = advance(model, beliefs[id], a, o);
        std::vector<std::size_t> q(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) q[i] = basis[i].step(states[id][i], a, o);
        std::size_t target = intern(std::move(next), std::move(q));
        transitions.resize(beliefs.size() * A * O);
        transitions[(id * A + a) * O + o] = target;
      }
    }
  }

  std::vector<std::size_t> select;
  std::vector<std::vector<Rational>> scores;
  for (std::size_t s = 0; s < beliefs.size(); ++s) {
    std::vector<Rational> row;
    std::size_t best = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      row.push_back(tables[i].expected(states[s][i], beliefs[s]));
      if (row[i] > row[best]) best = i;
    }
    select.push_back(best);
    scores.push_back(std::move(row));
  }

  StateMachine machine(A, O, beliefs.size(), 0, std::move(transitions));
  ModelBasedRule rule(std::move(basis), model, perf,
                      LearningRuleFsm(std::move(machine), std::move(select), "model_based"));
  rule.beliefs_ = std::move(beliefs);
  rule.basis_states_ = std::move(states);
  rule.scores_ = std::move(scores);
  return rule;
}

ReplanReport count_replans(const ModelBasedRule& rule, const FsmEnvironment& env,
                           std::size_t horizon) {
  if (horizon == 0) throw PreconditionError("replan horizon must be at least 1");
  FsmAgent agent[] = {rule.generated_agent()};
  auto graph = product_reachable(agent, env);
  auto selection = [&](std::size_t node) {
    return rule.rule().select(graph.node(node).machine_states[0]);
  };

  ReplanReport report;
  report.horizon = horizon;
  std::map<std::size_t, std::size_t> layer{{0, 1}};
  report.histories.push_back(1);
  report.replans.push_back(0);
  for (std::size_t d = 1; d <= horizon; ++d) {
    std::map<std::size_t, std::size_t> next;
    std::size_t total = 0, changed = 0;
    for (const auto& [node, count] : layer) {
      for (const auto& e : graph.edges(node)) {
        next[e.target] += count;
        total += count;
        if (selection(e.target) != selection(node)) changed += count;
      }
    }
    report.histories.push_back(total);
    report.replans.push_back(changed);
    layer = std::move(next);
  }

  // can_change[v][n]: from n some nonempty path reaches a node whose selection is not v.
  auto preds = graph.predecessors();
  std::map<std::size_t, std::vector<bool>> can_change;
  for (std::size_t n = 0; n < graph.size(); ++n) {
    std::size_t v = selection(n);
    if (can_change.count(v)) continue;
    std::vector<bool> mark(graph.size(), false);
    std::deque<std::size_t> queue;
    for (std::size_t m = 0; m < graph.size(); ++m) {
      if (selection(m) == v) continue;
      for (std::size_t p : preds[m]) {
        if (!mark[p]) {
          mark[p] = true;
          queue.push_back(p);
        }
      }
    }
    while (!queue.empty()) {
      std::size_t m = queue.front();
      queue.pop_front();
      for (std::size_t p : preds[m]) {
        if (!mark[p]) {
          mark[p] = true;
          queue.push_back(p);
        }
      }
    }
    can_change.emplace(v, std::move(mark));
  }
  report.every_history_replans = true;
  for (std::size_t n = 0; n < graph.size(); ++n) {
    if (graph.node(n).depth > horizon) continue;
    if (!can_change.at(selection(n))[n]) {
      report.every_history_replans = false;
      report.settled_witness = graph.history_to(n);
      break;
    }
  }
  return report;
}

}  // namespace crl
