#include "crl/performance.hpp"

#include <deque>
#include <limits>

#include "crl/errors.hpp"
#include "crl/linear.hpp"

namespace crl {

namespace {
constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
}

PerformanceSpec PerformanceSpec::discounted(Rational gamma) {
  gamma.canonicalize();
  if (gamma < 0 || gamma >= 1) throw SpecError("discount must satisfy 0 <= gamma < 1");
  PerformanceSpec p;
  p.kind_ = Kind::discounted;
  p.gamma_ = gamma;
  return p;
}

PerformanceSpec PerformanceSpec::finite_horizon_average(std::size_t horizon) {
  if (horizon == 0) throw SpecError("average-reward horizon must be at least 1");
  PerformanceSpec p;
  p.kind_ = Kind::finite_horizon_average;
  p.horizon_ = horizon;
  return p;
}

std::string PerformanceSpec::describe() const {
  if (kind_ == Kind::discounted) return "discounted(gamma=" + gamma_.get_str() + ")";
  return "finite_horizon_average(T=" + std::to_string(horizon_) + ")";
}

const Rational& ValueTable::at(std::size_t agent_state, std::size_t env_state) const {
  std::size_t key = agent_state * env_states_ + env_state;
  if (key >= slot_.size() || slot_[key] == npos) {
    throw Error("no value for agent state " + std::to_string(agent_state) + ", env state " +
                std::to_string(env_state));
  }
  return values_[slot_[key]];
}

bool ValueTable::contains(std::size_t agent_state, std::size_t env_state) const {
  std::size_t key = agent_state * env_states_ + env_state;
  return key < slot_.size() && slot_[key] != npos;
}

Rational ValueTable::expected(std::size_t agent_state, const Belief& belief) const {
  Rational total = 0;
  for (std::size_t s = 0; s < belief.size(); ++s) {
    if (belief[s] != 0) total += belief[s] * at(agent_state, s);
  }
  return total;
}

namespace {

struct Chain {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (agent state, env state)
  std::vector<std::size_t> slot;                           // q * S + s -> index
  // Transitions per pair: (target index, probability, reward).
  struct Move {
    std::size_t target;
    Rational probability;
    Rational reward;
  };
  std::vector<std::vector<Move>> moves;
};

Chain build_chain(const FsmAgent& agent, const FsmEnvironment& env, bool all_pairs) {
  const std::size_t S = env.num_states();
  Chain c;
  c.slot.assign(agent.num_states() * S, npos);
  std::deque<std::size_t> queue;
  auto add = [&](std::size_t q, std::size_t s) {
    std::size_t key = q * S + s;
    if (c.slot[key] != npos) return c.slot[key];
    c.slot[key] = c.pairs.size();
    c.pairs.emplace_back(q, s);
    queue.push_back(c.slot[key]);
    return c.slot[key];
  };
  if (all_pairs) {
    for (std::size_t q = 0; q < agent.num_states(); ++q)
      for (std::size_t s = 0; s < S; ++s) add(q, s);
  } else {
    add(agent.initial(), env.initial());
  }
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    auto [q, s] = c.pairs[i];
    std::vector<Chain::Move> moves;
    const auto& pi = agent.output(q);
    for (std::size_t a = 0; a < pi.size(); ++a) {
      if (pi[a] == 0) continue;
      for (const auto& out : env.outcomes(s, a)) {
        std::size_t t = add(agent.step(q, a, out.observation), out.next);
        moves.push_back(Chain::Move{t, pi[a] * out.probability, out.reward});
      }
    }
    if (c.moves.size() <= i) c.moves.resize(i + 1);
    c.moves[i] = std::move(moves);
  }
  c.moves.resize(c.pairs.size());
  return c;
}

/// W_k(x) = sum p (r + factor * W_{k-1}(x')), W_0 = 0.
std::vector<Rational> finite_sum(const Chain& c, std::size_t steps, const Rational& factor) {
  std::vector<Rational> w(c.pairs.size(), Rational(0));
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<Rational> next(c.pairs.size(), Rational(0));
    for (std::size_t i = 0; i < c.pairs.size(); ++i) {
      for (const auto& m : c.moves[i]) next[i] += m.probability * (m.reward + factor * w[m.target]);
    }
    w = std::move(next);
  }
  return w;
}

}  // namespace

ValueTable value_table(const FsmAgent& agent, const FsmEnvironment& env,
                       const PerformanceSpec& perf, const ValueOptions& options) {
  if (!(agent.interface() == env.interface())) {
    throw InterfaceMismatch("agent and environment use different interfaces");
  }
  Chain c = build_chain(agent, env, options.all_pairs);
  std::vector<Rational> values;
  if (perf.kind() == PerformanceSpec::Kind::finite_horizon_average) {
    values = finite_sum(c, perf.horizon(), Rational(1));
    Rational inv(1, perf.horizon());
    inv.canonicalize();
    for (auto& v : values) v *= inv;
  } else if (agent.horizon()) {
    if (!options.truncation) {
      throw PreconditionError(
          "discounted value of a table agent needs an explicit truncation depth");
    }
    values = finite_sum(c, *options.truncation, perf.gamma());
  } else {
    const std::size_t n = c.pairs.size();
    RationalMatrix m(n);
    std::vector<Rational> rhs(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) += 1;
      for (const auto& mv : c.moves[i]) {
        m(i, mv.target) -= perf.gamma() * mv.probability;
        rhs[i] += mv.probability * mv.reward;
      }
    }
    values = solve_linear(std::move(m), std::move(rhs));
  }
  return ValueTable(env.num_states(), std::move(c.slot), std::move(values));
}

Rational compute_value(const FsmAgent& agent, const FsmEnvironment& env,
                       const PerformanceSpec& perf, const History& from,
                       std::optional<std::size_t> truncation) {
  validate(from, env.interface());
  Belief belief = initial_belief(env);
  std::size_t q = agent.initial();
  for (std::size_t i = 0; i < from.size(); ++i) {
    const auto& step = from[i];
    auto next = agent.output(q)[step.action] > 0
                    ? update_belief(env, belief, step.action, step.observation)
                    : std::nullopt;
    if (!next) {
      throw PreconditionError("history is not realizable: step " + std::to_string(i + 1) +
                              " has probability zero");
    }
    belief = std::move(*next);
    q = agent.step(q, step.action, step.observation);
  }
  ValueOptions options;
  options.truncation = truncation;
  return value_table(agent, env, perf, options).expected(q, belief);
}

OptimalSet optimal_agents(std::span<const FsmAgent> agents, const FsmEnvironment& env,
                          const PerformanceSpec& perf, std::optional<std::size_t> truncation) {
  if (agents.empty()) throw PreconditionError("agent set is empty");
  OptimalSet out;
  for (const auto& a : agents) out.values.push_back(compute_value(a, env, perf, {}, truncation));
  Rational best = out.values[0];
  for (const auto& v : out.values) best = std::max(best, v);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    if (out.values[i] == best) out.optimal.push_back(i);
  return out;
}

}  // namespace crl
