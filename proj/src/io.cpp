#include "crl/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "crl/errors.hpp"

namespace crl::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SpecError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return get<T>(j, key);
}

std::size_t action_of(const Json& j, const Interface& iface) {
  if (j.is_number_unsigned()) {
    auto a = j.get<std::size_t>();
    if (a >= iface.num_actions()) throw SpecError("action index out of range");
    return a;
  }
  if (!j.is_string()) throw SpecError("expected an action name");
  try {
    return iface.action_index(j.get<std::string>());
  } catch (const Error&) {
    throw SpecError("unknown action '" + j.get<std::string>() + "'");
  }
}

std::size_t observation_of(const Json& j, const Interface& iface) {
  if (j.is_number_unsigned()) {
    auto o = j.get<std::size_t>();
    if (o >= iface.num_observations()) throw SpecError("observation index out of range");
    return o;
  }
  if (!j.is_string()) throw SpecError("expected an observation name");
  try {
    return iface.observation_index(j.get<std::string>());
  } catch (const Error&) {
    throw SpecError("unknown observation '" + j.get<std::string>() + "'");
  }
}

std::size_t index_of(const std::vector<std::string>& names, const Json& j, const char* what) {
  if (j.is_number_unsigned()) {
    auto i = j.get<std::size_t>();
    if (i >= names.size()) throw SpecError(std::string(what) + " index out of range");
    return i;
  }
  if (j.is_string()) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == j.get<std::string>()) return i;
    }
  }
  throw SpecError(std::string("unknown ") + what + " " + j.dump());
}

Json machine_json(const StateMachine& m) {
  Json states = Json::array();
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    Json per_action = Json::array();
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      Json per_obs = Json::array();
      for (std::size_t o = 0; o < m.num_observations(); ++o) per_obs.push_back(m.step(q, a, o));
      per_action.push_back(std::move(per_obs));
    }
    states.push_back(std::move(per_action));
  }
  return states;
}

std::vector<std::size_t> transitions_from(const Json& j, const Interface& iface,
                                          std::size_t num_states) {
  if (!j.is_array() || j.size() != num_states) {
    throw SpecError("'transitions' needs one entry per state");
  }
  std::vector<std::size_t> flat;
  for (const auto& per_action : j) {
    if (!per_action.is_array() || per_action.size() != iface.num_actions()) {
      throw SpecError("'transitions' needs one entry per action in every state");
    }
    for (const auto& per_obs : per_action) {
      if (!per_obs.is_array() || per_obs.size() != iface.num_observations()) {
        throw SpecError("'transitions' needs one target per observation");
      }
      for (const auto& t : per_obs) {
        if (!t.is_number_unsigned() || t.get<std::size_t>() >= num_states) {
          throw SpecError("transition target out of range");
        }
        flat.push_back(t.get<std::size_t>());
      }
    }
  }
  return flat;
}

}  // namespace

Json to_json(const Rational& value) {
  if (value.get_num().fits_slong_p() && value.get_den().fits_slong_p()) {
    return Json::array({value.get_num().get_si(), value.get_den().get_si()});
  }
  // Too large for JSON integers: decimal strings.
  return Json::array({value.get_num().get_str(), value.get_den().get_str()});
}

Rational rational_from(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_array() && j.size() == 2) {
      auto part = [](const Json& x) {
        return x.is_string() ? x.get<std::string>() : std::to_string(x.get<long>());
      };
      return parse_rational(part(j[0]) + "/" + part(j[1]));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad rational: ") + e.what());
  }
  throw SpecError("bad rational " + j.dump() + " (use [num, den], an integer or \"n/d\")");
}

Json to_json(const Interface& iface) {
  return Json{{"actions", iface.actions()}, {"observations", iface.observations()}};
}

Interface interface_from(const Json& j) {
  return Interface(get<std::vector<std::string>>(j, "actions"),
                   get<std::vector<std::string>>(j, "observations"));
}

Json to_json(const ActionDistribution& dist, const Interface& iface) {
  for (std::size_t a = 0; a < dist.size(); ++a) {
    if (dist[a] == 1) return iface.action(a);
  }
  Json out = Json::object();
  for (std::size_t a = 0; a < dist.size(); ++a) {
    if (dist[a] != 0) out[iface.action(a)] = to_json(dist[a]);
  }
  return out;
}

ActionDistribution distribution_from(const Json& j, const Interface& iface) {
  const std::size_t A = iface.num_actions();
  if (j.is_string() || j.is_number_unsigned()) {
    return ActionDistribution::point_mass(A, action_of(j, iface));
  }
  if (j.is_object()) {
    std::vector<Rational> p(A, Rational(0));
    for (const auto& [name, value] : j.items()) p[action_of(Json(name), iface)] = rational_from(value);
    return ActionDistribution(std::move(p));
  }
  throw SpecError("bad action distribution " + j.dump());
}

Json to_json(const History& history, const Interface& iface) {
  Json out = Json::array();
  for (const auto& s : history) {
    out.push_back(Json::array({iface.action(s.action), iface.observation(s.observation)}));
  }
  return out;
}

History history_from(const Json& j, const Interface& iface) {
  if (!j.is_array()) throw SpecError("a history is a list of [action, observation] pairs");
  std::vector<Step> steps;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw SpecError("a history is a list of [action, observation] pairs");
    }
    steps.push_back({action_of(pair[0], iface), observation_of(pair[1], iface)});
  }
  return History(std::move(steps));
}

Json to_json(const FsmAgent& agent) {
  const Interface& iface = agent.interface();
  Json outputs = Json::array();
  for (const auto& d : agent.outputs()) outputs.push_back(to_json(d, iface));
  Json j{{"kind", "fsm"},
         {"name", agent.name()},
         {"initial", agent.initial()},
         {"outputs", std::move(outputs)},
         {"transitions", machine_json(agent.machine())}};
  if (agent.horizon()) j["horizon"] = *agent.horizon();
  return j;
}

Json to_json(const TableAgent& agent) {
  const Interface& iface = agent.interface();
  Json entries = Json::array();
  for (std::size_t i = 0; i < agent.histories().size(); ++i) {
    entries.push_back({{"history", to_json(agent.histories()[i], iface)},
                       {"output", to_json(agent.entry(i), iface)}});
  }
  return Json{{"kind", "table"},
              {"name", agent.name()},
              {"horizon", agent.horizon()},
              {"fallback", to_json(agent.fallback(), iface)},
              {"entries", std::move(entries)}};
}

FsmAgent agent_from(const Json& j, const Interface& iface) {
  auto kind = get<std::string>(j, "kind");
  auto name = get_or<std::string>(j, "name", "");
  if (kind == "constant") {
    return FsmAgent::constant(iface, distribution_from(field(j, "output"), iface), name);
  }
  if (kind == "fsm") {
    const Json& outs = field(j, "outputs");
    if (!outs.is_array() || outs.empty()) throw SpecError("'outputs' must be a non-empty list");
    std::vector<ActionDistribution> outputs;
    for (const auto& o : outs) outputs.push_back(distribution_from(o, iface));
    auto transitions = transitions_from(field(j, "transitions"), iface, outputs.size());
    auto initial = get_or<std::size_t>(j, "initial", 0);
    if (initial >= outputs.size()) throw SpecError("initial state out of range");
    FsmAgent agent(iface, std::move(outputs), std::move(transitions), initial, name);
    if (j.contains("horizon") && !j.at("horizon").is_null()) {
      agent.set_horizon(get<std::size_t>(j, "horizon"));
    }
    return agent;
  }
  if (kind == "table") {
    auto horizon = get<std::size_t>(j, "horizon");
    auto fallback = distribution_from(field(j, "fallback"), iface);
    std::map<History, ActionDistribution> entries;
    for (const auto& e : get_or<Json>(j, "entries", Json::array())) {
      History h = history_from(field(e, "history"), iface);
      if (h.size() > horizon) throw SpecError("table entry longer than the horizon");
      entries.insert_or_assign(h, distribution_from(field(e, "output"), iface));
    }
    TableAgent table(
        iface, horizon,
        [&](const History& h) {
          auto it = entries.find(h);
          return it == entries.end() ? fallback : it->second;
        },
        fallback, name);
    return table.compile();
  }
  throw SpecError("unknown agent kind '" + kind + "'");
}

Json agent_set_json(const Interface& iface, std::span<const FsmAgent> agents) {
  Json list = Json::array();
  for (const auto& a : agents) list.push_back(to_json(a));
  return Json{{"interface", to_json(iface)}, {"agents", std::move(list)}};
}

Json agent_set_json(const Interface& iface, std::span<const TableAgent> agents) {
  Json list = Json::array();
  for (const auto& a : agents) list.push_back(to_json(a));
  return Json{{"interface", to_json(iface)}, {"agents", std::move(list)}};
}

AgentSet agent_set_from(const Json& j) {
  Interface iface = interface_from(field(j, "interface"));
  AgentSet out;
  const Json& list = field(j, "agents");
  if (!list.is_array()) throw SpecError("'agents' must be a list");
  for (const auto& a : list) out.push_back(agent_from(a, iface));
  return out;
}

Json to_json(const LearningRuleFsm& rule) {
  return Json{{"name", rule.name()},
              {"initial", rule.machine().initial()},
              {"transitions", machine_json(rule.machine())},
              {"select", rule.selections()}};
}

LearningRuleFsm rule_from(const Json& j, const Interface& iface) {
  auto select = get<std::vector<std::size_t>>(j, "select");
  if (select.empty()) throw SpecError("'select' must be non-empty");
  auto transitions = transitions_from(field(j, "transitions"), iface, select.size());
  auto initial = get_or<std::size_t>(j, "initial", 0);
  if (initial >= select.size()) throw SpecError("initial state out of range");
  StateMachine m(iface.num_actions(), iface.num_observations(), select.size(), initial,
                 std::move(transitions));
  return LearningRuleFsm(std::move(m), std::move(select), get_or<std::string>(j, "name", ""));
}

Json to_json(const FsmEnvironment& env) {
  const Interface& iface = env.interface();
  Json states = Json::array();
  for (std::size_t s = 0; s < env.num_states(); ++s) {
    Json per_action = Json::array();
    for (std::size_t a = 0; a < iface.num_actions(); ++a) {
      Json row = Json::array();
      for (const auto& out : env.outcomes(s, a)) {
        Json entry = Json::array({out.next, iface.observation(out.observation),
                                  to_json(out.probability)});
        if (!env.reward_table()) entry.push_back(to_json(out.reward));
        row.push_back(std::move(entry));
      }
      per_action.push_back(std::move(row));
    }
    states.push_back(std::move(per_action));
  }
  Json j{{"kind", "fsm"},
         {"name", env.name()},
         {"interface", to_json(iface)},
         {"states", env.num_states()},
         {"initial", env.initial()},
         {"dynamics", std::move(states)}};
  if (const auto& table = env.reward_table()) {
    Json rewards = Json::object();
    for (std::size_t a = 0; a < iface.num_actions(); ++a) {
      Json row = Json::object();
      for (std::size_t o = 0; o < iface.num_observations(); ++o) {
        row[iface.observation(o)] = to_json((*table)[a][o]);
      }
      rewards[iface.action(a)] = std::move(row);
    }
    j["rewards"] = std::move(rewards);
  }
  return j;
}

FsmEnvironment environment_from(const Json& j) {
  auto kind = get<std::string>(j, "kind");
  if (kind == "switching") return build_switching_env(switching_from(j));
  if (kind == "csl") return build_csl_env(csl_from(j));
  if (kind != "fsm") throw SpecError("unknown environment kind '" + kind + "'");
  Interface iface = interface_from(field(j, "interface"));
  auto num_states = get<std::size_t>(j, "states");
  auto initial = get_or<std::size_t>(j, "initial", 0);
  if (num_states == 0 || initial >= num_states) throw SpecError("bad state count or initial state");
  const Json& dyn = field(j, "dynamics");
  if (!dyn.is_array() || dyn.size() != num_states) {
    throw SpecError("'dynamics' needs one entry per state");
  }
  std::vector<std::vector<Outcome>> dynamics;
  for (const auto& per_action : dyn) {
    if (!per_action.is_array() || per_action.size() != iface.num_actions()) {
      throw SpecError("'dynamics' needs one row per action in every state");
    }
    for (const auto& row : per_action) {
      std::vector<Outcome> outs;
      for (const auto& e : row) {
        if (!e.is_array() || e.size() < 3 || e.size() > 4 || !e[0].is_number_unsigned()) {
          throw SpecError("dynamics entries are [next, observation, probability, reward?]");
        }
        outs.push_back({e[0].get<std::size_t>(), observation_of(e[1], iface), rational_from(e[2]),
                        e.size() == 4 ? rational_from(e[3]) : Rational(0)});
      }
      dynamics.push_back(std::move(outs));
    }
  }
  auto name = get_or<std::string>(j, "name", "");
  if (j.contains("rewards")) {
    RewardTable table(iface.num_actions(), std::vector<Rational>(iface.num_observations(), Rational(0)));
    for (const auto& [a, row] : field(j, "rewards").items()) {
      for (const auto& [o, r] : row.items()) {
        table[action_of(Json(a), iface)][observation_of(Json(o), iface)] = rational_from(r);
      }
    }
    return FsmEnvironment(std::move(iface), num_states, initial, std::move(dynamics),
                          std::move(table), name);
  }
  return FsmEnvironment(std::move(iface), num_states, initial, std::move(dynamics), name);
}

Json to_json(const SwitchingSpec& spec, std::span<const GridLayout> layouts) {
  Json mdps = Json::array();
  for (const auto& m : spec.mdps) {
    Json transitions = Json::array();
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      Json per_action = Json::array();
      for (std::size_t a = 0; a < m.num_actions(); ++a) {
        Json row = Json::array();
        for (const auto& t : m.row(s, a)) {
          row.push_back(Json::array({m.states[t.next], to_json(t.probability), to_json(t.reward)}));
        }
        per_action.push_back(std::move(row));
      }
      transitions.push_back(std::move(per_action));
    }
    Json terminal = Json::array();
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      if (m.is_terminal(s)) terminal.push_back(m.states[s]);
    }
    mdps.push_back({{"name", m.name},
                    {"states", m.states},
                    {"actions", m.actions},
                    {"start", m.states[m.start]},
                    {"terminal", std::move(terminal)},
                    {"transitions", std::move(transitions)}});
  }
  Json j{{"kind", "switching"},
         {"p_switch", to_json(spec.p_switch)},
         {"initial_index", spec.initial_index},
         {"mdps", std::move(mdps)}};
  if (!layouts.empty()) {
    Json list = Json::array();
    for (const auto& g : layouts) {
      Json walls = Json::array();
      for (std::size_t c = 0; c < g.wall.size(); ++c) {
        if (g.wall[c]) walls.push_back(c);
      }
      list.push_back({{"width", g.width},
                      {"height", g.height},
                      {"walls", std::move(walls)},
                      {"start", g.start},
                      {"goal", g.goal},
                      {"hazard", g.hazard}});
    }
    j["layouts"] = std::move(list);
  }
  return j;
}

SwitchingSpec switching_from(const Json& j) {
  SwitchingSpec spec;
  spec.p_switch = rational_from(field(j, "p_switch"));
  spec.initial_index = get_or<std::size_t>(j, "initial_index", 0);
  const Json& mdps = field(j, "mdps");
  if (!mdps.is_array()) throw SpecError("'mdps' must be a list");
  for (const auto& mj : mdps) {
    TabularMdp m;
    m.name = get_or<std::string>(mj, "name", "");
    m.states = get<std::vector<std::string>>(mj, "states");
    m.actions = get<std::vector<std::string>>(mj, "actions");
    m.start = index_of(m.states, get_or<Json>(mj, "start", Json(0)), "state");
    if (mj.contains("terminal")) {
      m.terminal.assign(m.states.size(), false);
      for (const auto& t : field(mj, "terminal")) m.terminal[index_of(m.states, t, "state")] = true;
    }
    const Json& tr = field(mj, "transitions");
    if (!tr.is_array() || tr.size() != m.states.size()) {
      throw SpecError("'transitions' needs one entry per MDP state");
    }
    for (const auto& per_action : tr) {
      if (!per_action.is_array() || per_action.size() != m.actions.size()) {
        throw SpecError("'transitions' needs one row per action");
      }
      for (const auto& row : per_action) {
        std::vector<MdpTransition> outs;
        for (const auto& e : row) {
          if (!e.is_array() || e.size() != 3) {
            throw SpecError("MDP transitions are [next, probability, reward]");
          }
          outs.push_back({index_of(m.states, e[0], "state"), rational_from(e[1]), rational_from(e[2])});
        }
        m.transitions.push_back(std::move(outs));
      }
    }
    spec.mdps.push_back(std::move(m));
  }
  validate(spec);
  return spec;
}

std::vector<GridLayout> layouts_from(const Json& j) {
  std::vector<GridLayout> out;
  if (!j.contains("layouts")) return out;
  for (const auto& lj : field(j, "layouts")) {
    GridLayout g;
    g.width = get<std::size_t>(lj, "width");
    g.height = get<std::size_t>(lj, "height");
    g.wall.assign(g.width * g.height, false);
    for (auto c : get<std::vector<std::size_t>>(lj, "walls")) {
      if (c >= g.wall.size()) throw SpecError("wall cell out of range");
      g.wall[c] = true;
    }
    g.start = get<std::size_t>(lj, "start");
    g.goal = get<std::size_t>(lj, "goal");
    g.hazard = get<std::size_t>(lj, "hazard");
    if (g.start >= g.wall.size() || g.goal >= g.wall.size() || g.hazard >= g.wall.size()) {
      throw SpecError("layout cell out of range");
    }
    out.push_back(std::move(g));
  }
  return out;
}

Json to_json(const CslSchedule& s) {
  Json phases = Json::array();
  for (const auto& p : s.phases) {
    Json dist = Json::array();
    for (const auto& r : p.distribution) dist.push_back(to_json(r));
    phases.push_back({{"distribution", std::move(dist)},
                      {"duration", p.duration ? Json(*p.duration) : Json(nullptr)}});
  }
  return Json{{"kind", "csl"},
              {"inputs", s.inputs},
              {"labels", s.labels},
              {"cyclic", s.cyclic},
              {"phases", std::move(phases)}};
}

CslSchedule csl_from(const Json& j) {
  CslSchedule s;
  s.inputs = get<std::vector<std::string>>(j, "inputs");
  s.labels = get<std::vector<std::string>>(j, "labels");
  s.cyclic = get_or<bool>(j, "cyclic", false);
  for (const auto& pj : field(j, "phases")) {
    CslPhase phase;
    for (const auto& r : field(pj, "distribution")) phase.distribution.push_back(rational_from(r));
    if (pj.contains("duration") && !pj.at("duration").is_null()) {
      phase.duration = get<std::size_t>(pj, "duration");
    }
    s.phases.push_back(std::move(phase));
  }
  validate(s);
  return s;
}

Json to_json(const PerformanceSpec& perf) {
  if (perf.kind() == PerformanceSpec::Kind::discounted) {
    return Json{{"kind", "discounted"}, {"gamma", to_json(perf.gamma())}};
  }
  return Json{{"kind", "finite_horizon_average"}, {"horizon", perf.horizon()}};
}

PerformanceSpec performance_from(const Json& j) {
  auto kind = get<std::string>(j, "kind");
  if (kind == "discounted") return PerformanceSpec::discounted(rational_from(field(j, "gamma")));
  if (kind == "finite_horizon_average") {
    return PerformanceSpec::finite_horizon_average(get<std::size_t>(j, "horizon"));
  }
  throw SpecError("unknown performance kind '" + kind + "'");
}

Json to_json(const CrlInstance& inst) {
  const Interface& iface = inst.env.interface();
  Json agents = Json::array(), basis = Json::array();
  for (const auto& a : inst.agents) agents.push_back(to_json(a));
  for (const auto& b : inst.basis) basis.push_back(to_json(b));
  Json j{{"interface", to_json(iface)},
         {"environment", to_json(inst.env)},
         {"performance", to_json(inst.perf)},
         {"agents", std::move(agents)},
         {"basis", std::move(basis)}};
  if (inst.truncation) j["truncation"] = *inst.truncation;
  return j;
}

CrlInstance instance_from(const Json& j) {
  FsmEnvironment env = environment_from(field(j, "environment"));
  const Interface& iface = env.interface();
  if (j.contains("interface") && interface_from(j.at("interface")) != iface) {
    throw SpecError("'interface' does not match the environment's interface");
  }
  std::vector<FsmAgent> agents;
  for (const auto& a : field(j, "agents")) agents.push_back(agent_from(a, iface));
  std::vector<FsmAgent> basis;
  for (const auto& b : field(j, "basis")) {
    if (b.is_string()) {
      auto it = std::find_if(agents.begin(), agents.end(),
                             [&](const FsmAgent& a) { return a.name() == b.get<std::string>(); });
      if (it == agents.end()) throw SpecError("basis names unknown agent '" + b.get<std::string>() + "'");
      basis.push_back(*it);
    } else {
      basis.push_back(agent_from(b, iface));
    }
  }
  std::optional<std::size_t> truncation;
  if (j.contains("truncation") && !j.at("truncation").is_null()) {
    truncation = get<std::size_t>(j, "truncation");
  }
  return CrlInstance{std::move(env), performance_from(field(j, "performance")), std::move(agents),
                     std::move(basis), truncation};
}

Json to_json(const Verdict& v, const Interface& iface) {
  Json j{{"holds", v.holds}, {"semantics", v.semantics()}};
  if (v.horizon) j["horizon"] = *v.horizon;
  j["witness"] = v.witness ? to_json(*v.witness, iface) : Json(nullptr);
  return j;
}

Json to_json(const CrlReport& report, const CrlInstance& inst) {
  const Interface& iface = inst.env.interface();
  Json optimal = Json::array(), reaches = Json::array(), values = Json::array();
  for (auto i : report.optimal) optimal.push_back(agent_id(inst.agents, i));
  for (const auto& r : report.reaches) {
    Json entry{{"id", r.id}, {"modality", "never"}, {"holds", r.never.holds},
               {"semantics", r.never.semantics()}};
    if (r.never.witness) entry["witness"] = to_json(*r.never.witness, iface);
    reaches.push_back(std::move(entry));
  }
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    values.push_back({{"id", agent_id(inst.agents, i)}, {"value", to_json(report.values[i])},
                      {"approx", report.values[i].get_d()}});
  }
  return Json{{"is_crl", report.is_crl},
              {"optimal", std::move(optimal)},
              {"reaches", std::move(reaches)},
              {"basis_generates", to_json(report.basis_generates, iface)},
              {"basis_proper_subset", report.basis_proper_subset},
              {"values", std::move(values)},
              {"performance", inst.perf.describe()}};
}

Json to_json(const ReplanReport& r, const Interface& iface) {
  Json j{{"horizon", r.horizon},
         {"histories", r.histories},
         {"replans", r.replans},
         {"every_history_replans", r.every_history_replans}};
  j["settled_witness"] = r.settled_witness ? to_json(*r.settled_witness, iface) : Json(nullptr);
  return j;
}

Json to_json(const QLearnerConfig& c) {
  return Json{{"id", c.id},
              {"epsilon", c.epsilon},
              {"alpha0", c.alpha0},
              {"annealing", c.annealing == Annealing::none ? "none" : "harmonic"},
              {"kappa", c.kappa},
              {"gamma", c.gamma},
              {"initial_q", c.initial_q}};
}

QLearnerConfig config_from(const Json& j) {
  QLearnerConfig c;
  c.id = get_or<std::string>(j, "id", c.id);
  c.epsilon = get_or<double>(j, "epsilon", c.epsilon);
  c.alpha0 = get_or<double>(j, "alpha0", c.alpha0);
  auto annealing = get_or<std::string>(j, "annealing", "none");
  if (annealing == "harmonic") {
    c.annealing = Annealing::harmonic;
  } else if (annealing != "none") {
    throw SpecError("annealing must be 'none' or 'harmonic'");
  }
  c.kappa = get_or<double>(j, "kappa", c.kappa);
  c.gamma = get_or<double>(j, "gamma", c.gamma);
  c.initial_q = get_or<double>(j, "initial_q", c.initial_q);
  return c;
}

Json to_json(const ExperimentOptions& o) {
  return Json{{"steps", o.steps},
              {"runs", o.runs},
              {"bin_width", o.bin_width},
              {"episode_cap", o.episode_cap},
              {"master_seed", o.master_seed}};
}

Json manifest(const RunStats& s) {
  Json bins = Json::array();
  for (std::size_t b = 0; b < s.mean.size(); ++b) {
    bins.push_back({{"bin_start", s.bin_start[b]},
                    {"mean", std::isfinite(s.mean[b]) ? Json(s.mean[b]) : Json(nullptr)},
                    {"ci_half", s.ci_half[b]},
                    {"runs", s.counts[b]}});
  }
  return Json{{"config", to_json(s.config)},
              {"options", to_json(s.options)},
              {"rng", s.rng},
              {"bins", std::move(bins)}};
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace crl::io
