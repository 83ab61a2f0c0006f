#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "crl/environments.hpp"
#include "crl/errors.hpp"
#include "crl/linear.hpp"

namespace crl {

namespace {

const std::vector<std::string> kMoves{"up", "down", "left", "right"};

std::size_t move(const GridLayout& g, std::size_t cell, std::size_t action) {
  std::size_t r = cell / g.width, c = cell % g.width;
  switch (action) {
    case 0: if (r > 0) --r; break;
    case 1: if (r + 1 < g.height) ++r; break;
    case 2: if (c > 0) --c; break;
    default: if (c + 1 < g.width) ++c; break;
  }
  std::size_t target = r * g.width + c;
  return g.wall[target] ? cell : target;
}

bool goal_reachable(const GridLayout& g) {
  std::vector<bool> seen(g.wall.size(), false);
  std::deque<std::size_t> queue{g.start};
  seen[g.start] = true;
  while (!queue.empty()) {
    std::size_t cell = queue.front();
    queue.pop_front();
    if (cell == g.goal) return true;
    if (cell == g.hazard) continue;
    for (std::size_t a = 0; a < 4; ++a) {
      std::size_t next = move(g, cell, a);
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  return false;
}

GridLayout random_layout(const GridworldOptions& o, std::mt19937_64& rng) {
  GridLayout g;
  g.width = o.width;
  g.height = o.height;
  const std::size_t cells = o.width * o.height;
  g.wall.assign(cells, false);
  g.start = 0;
  // Shuffle the non-start cells and take goal, hazard, then walls off the front.
  std::vector<std::size_t> order;
  for (std::size_t c = 1; c < cells; ++c) order.push_back(c);
  std::shuffle(order.begin(), order.end(), rng);
  g.goal = order[0];
  g.hazard = order[1];
  for (std::size_t k = 0; k < o.walls && k + 2 < order.size(); ++k) g.wall[order[k + 2]] = true;
  return g;
}

std::vector<bool> reachable_states(const TabularMdp& mdp) {
  std::vector<bool> seen(mdp.num_states(), false);
  std::deque<std::size_t> queue{mdp.start};
  seen[mdp.start] = true;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (mdp.is_terminal(s)) continue;
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      for (const auto& t : mdp.row(s, a)) {
        if (t.probability > 0 && !seen[t.next]) {
          seen[t.next] = true;
          queue.push_back(t.next);
        }
      }
    }
  }
  return seen;
}

}  // namespace

TabularMdp gridworld_mdp(const GridLayout& g, std::string name) {
  const std::size_t cells = g.width * g.height;
  if (g.width < 2 || g.height < 2) throw PreconditionError("gridworlds need at least 2x2 cells");
  if (g.wall.size() != cells) throw SpecError("wall mask must cover every cell");
  TabularMdp mdp;
  for (std::size_t c = 0; c < cells; ++c) {
    mdp.states.push_back("r" + std::to_string(c / g.width) + "c" + std::to_string(c % g.width));
  }
  mdp.actions = kMoves;
  mdp.start = g.start;
  mdp.terminal.assign(cells, false);
  mdp.terminal[g.goal] = true;
  mdp.terminal[g.hazard] = true;
  mdp.name = std::move(name);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t a = 0; a < 4; ++a) {
      std::size_t next = (g.wall[c] || mdp.terminal[c]) ? c : move(g, c, a);
      Rational reward = next == c ? 0 : next == g.goal ? 1 : next == g.hazard ? -1 : 0;
      mdp.transitions.push_back({{next, Rational(1), reward}});
    }
  }
  validate(mdp);
  return mdp;
}

PolicySolution solve_mdp(const TabularMdp& mdp, const Rational& gamma) {
  validate(mdp);
  if (gamma < 0 || gamma >= 1) throw PreconditionError("discount must lie in [0, 1)");
  const std::size_t S = mdp.num_states(), A = mdp.num_actions();

  auto q_value = [&](const std::vector<Rational>& v, std::size_t s, std::size_t a) {
    Rational q = 0;
    for (const auto& t : mdp.row(s, a)) {
      q += t.probability * (t.reward + (mdp.is_terminal(t.next) ? Rational(0) : gamma * v[t.next]));
    }
    return q;
  };
  auto evaluate = [&](const std::vector<std::size_t>& policy) {
    RationalMatrix m(S);
    std::vector<Rational> b(S, Rational(0));
    for (std::size_t s = 0; s < S; ++s) {
      m(s, s) += 1;
      if (mdp.is_terminal(s)) continue;
      for (const auto& t : mdp.row(s, policy[s])) {
        b[s] += t.probability * t.reward;
        if (!mdp.is_terminal(t.next)) m(s, t.next) -= gamma * t.probability;
      }
    }
    return solve_linear(std::move(m), std::move(b));
  };

  PolicySolution sol;
  sol.policy.assign(S, 0);
  for (bool changed = true; changed;) {
    changed = false;
    sol.values = evaluate(sol.policy);
    for (std::size_t s = 0; s < S; ++s) {
      if (mdp.is_terminal(s)) continue;
      Rational current = q_value(sol.values, s, sol.policy[s]);
      for (std::size_t a = 0; a < A; ++a) {
        if (q_value(sol.values, s, a) > current) {
          sol.policy[s] = a;
          current = q_value(sol.values, s, a);
          changed = true;
        }
      }
    }
  }
  // Canonical greedy policy and uniqueness on states reachable from start.
  auto reachable = reachable_states(mdp);
  for (std::size_t s = 0; s < S; ++s) {
    if (mdp.is_terminal(s)) {
      sol.policy[s] = 0;
      continue;
    }
    std::vector<Rational> q;
    for (std::size_t a = 0; a < A; ++a) q.push_back(q_value(sol.values, s, a));
    std::size_t best = 0;
    for (std::size_t a = 1; a < A; ++a) {
      if (q[a] > q[best]) best = a;
    }
    sol.policy[s] = best;
    if (reachable[s]) {
      for (std::size_t a = 0; a < A; ++a) {
        if (a != best && q[a] == q[best]) sol.unique = false;
      }
    }
  }
  return sol;
}

GridworldSuite build_gridworld_suite(const GridworldOptions& options) {
  if (options.count == 0) throw PreconditionError("a gridworld suite needs at least one variant");
  if (options.width < 2 || options.height < 2) {
    throw PreconditionError("gridworlds need at least 2x2 cells");
  }
  if (options.walls + 3 > options.width * options.height) {
    throw PreconditionError("too many walls for the grid");
  }
  std::mt19937_64 rng(options.seed);
  GridworldSuite suite;
  suite.spec.p_switch = options.p_switch;
  while (suite.layouts.size() < options.count) {
    if (suite.attempts >= options.retry_budget) {
      throw PreconditionError("could not find " + std::to_string(options.count) +
                              " gridworlds with pairwise distinct optimal policies within " +
                              std::to_string(options.retry_budget) + " attempts");
    }
    ++suite.attempts;
    GridLayout layout = random_layout(options, rng);
    if (!goal_reachable(layout)) continue;
    TabularMdp mdp = gridworld_mdp(layout, "grid" + std::to_string(suite.layouts.size()));
    PolicySolution sol = solve_mdp(mdp, options.gamma);
    bool duplicate = false;
    for (const auto& p : suite.optimal_policies) duplicate = duplicate || p == sol.policy;
    if (duplicate) continue;
    suite.layouts.push_back(layout);
    suite.optimal_policies.push_back(sol.policy);
    suite.unique_optimal.push_back(sol.unique);
    suite.spec.mdps.push_back(std::move(mdp));
  }
  validate(suite.spec);
  return suite;
}

namespace {

std::string draw(const GridLayout& g, const std::vector<std::size_t>* policy) {
  static const char arrows[] = {'^', 'v', '<', '>'};
  std::ostringstream out;
  for (std::size_t r = 0; r < g.height; ++r) {
    for (std::size_t c = 0; c < g.width; ++c) {
      std::size_t cell = r * g.width + c;
      char ch = '.';
      if (g.wall[cell]) ch = '#';
      else if (cell == g.goal) ch = 'G';
      else if (cell == g.hazard) ch = 'X';
      else if (cell == g.start && !policy) ch = 'S';
      else if (policy) ch = arrows[(*policy)[cell] % 4];
      out << ch;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string describe(const GridLayout& layout) { return draw(layout, nullptr); }

std::string describe(const GridLayout& layout, const std::vector<std::size_t>& policy) {
  return draw(layout, &policy);
}

}  // namespace crl
