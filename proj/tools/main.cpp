#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crl/basis_analysis.hpp"
#include "crl/classify.hpp"
#include "crl/environments.hpp"
#include "crl/errors.hpp"
#include "crl/experiments.hpp"
#include "crl/io.hpp"
#include "crl/model_based.hpp"
#include "crl/operators.hpp"
#include "crl/performance.hpp"
#include "crl/random_instances.hpp"
#include "selftest.hpp"
#include "workspace.hpp"

using namespace crl;
using io::Json;

namespace {

constexpr int kMalformed = 2;
constexpr int kPrecondition = 3;

struct Flags {
  std::string agents, basis, agent, env, rules, target, pool, first, second, instance, model,
      suite, configs, from, name, out, save, kind = "gridworld", format = "json",
      modality = "never", menu = "default", anneal = "none", gamma, p_switch;
  int index = -1;
  std::size_t horizon = 0, k = 1, average = 0, watch = 0, depth = 0, truncation = 0;
  std::size_t width = 5, height = 5, count = 10, walls = 4, period = 2, steps = 200000, runs = 100,
              bin = 1000, cap = 100, threads = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.15, alpha = 0.1, kappa = 100, q_gamma = 0.95, initial_q = 0;
  bool orthogonal = false, parallel = false;
};

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(f.out);
  if (!out) throw Error("cannot write '" + f.out + "'");
  out << text;
}

void emit(const Flags& f, const std::string& command, Json config, Json result) {
  Json report{{"command", command}, {"config", std::move(config)}, {"result", std::move(result)}};
  emit(f, report.dump(2));
}

PerformanceSpec performance(const Flags& f) {
  if (!f.gamma.empty() && f.average) throw SpecError("give either --gamma or --average, not both");
  if (!f.gamma.empty()) return PerformanceSpec::discounted(parse_rational(f.gamma));
  if (f.average) return PerformanceSpec::finite_horizon_average(f.average);
  throw SpecError("a performance measure is required: --gamma G or --average T");
}

std::optional<std::size_t> truncation(const Flags& f) {
  return f.truncation ? std::optional<std::size_t>(f.truncation) : std::nullopt;
}

Json ids(const std::vector<FsmAgent>& agents, const std::vector<std::size_t>& indices) {
  Json out = Json::array();
  for (auto i : indices) out.push_back(agent_id(agents, i));
  return out;
}

std::vector<ActionDistribution> menu(const Flags& f, const Interface& iface) {
  if (f.menu == "default") return default_menu(iface.num_actions());
  if (f.menu == "point") {
    std::vector<ActionDistribution> m;
    for (std::size_t a = 0; a < iface.num_actions(); ++a) {
      m.push_back(ActionDistribution::point_mass(iface.num_actions(), a));
    }
    return m;
  }
  throw SpecError("--menu must be 'default' or 'point'");
}

QLearnerConfig learner(const Flags& f) {
  QLearnerConfig c;
  c.id = f.anneal == "none" ? "continual" : "annealed";
  c.epsilon = f.epsilon;
  c.alpha0 = f.alpha;
  if (f.anneal == "harmonic") {
    c.annealing = Annealing::harmonic;
  } else if (f.anneal != "none") {
    throw SpecError("--anneal must be 'none' or 'harmonic'");
  }
  c.kappa = f.kappa;
  c.gamma = f.q_gamma;
  c.initial_q = f.initial_q;
  return c;
}

ExperimentOptions experiment(const Flags& f) {
  ExperimentOptions o;
  o.steps = f.steps;
  o.runs = f.runs;
  o.bin_width = f.bin;
  o.episode_cap = f.cap;
  o.master_seed = f.seed;
  o.threads = f.threads;
  return o;
}

int run(const std::string& command, const Flags& f, cli::Workspace& ws) {
  Json config = Json::object();
  auto note = [&](const char* key, const std::string& value) {
    if (!value.empty()) config[key] = value;
  };
  note("agents", f.agents);
  note("basis", f.basis);
  note("agent", f.agent);
  note("env", f.env);
  note("instance", f.instance);

  if (command == "check-generates") {
    auto basis = ws.agents(f.basis);
    auto lambda = ws.agents(f.agents);
    auto env = ws.environment(f.env);
    emit(f, command, config, {{"verdict", io::to_json(check_generates(basis, lambda, env), env.interface())}});
  } else if (command == "check-uniform-generates") {
    auto basis = ws.agents(f.basis);
    auto lambda = ws.agents(f.agents);
    emit(f, command, config,
         {{"verdict", io::to_json(check_uniform_generates(basis, lambda), basis[0].interface())}});
  } else if (command == "check-sigma-generates") {
    auto basis = ws.agents(f.basis);
    auto lambda = ws.agents(f.agents);
    const Json& rj = ws.json(f.rules);
    Interface iface = io::interface_from(rj.at("interface"));
    std::vector<LearningRuleFsm> rules;
    for (const auto& r : rj.at("rules")) rules.push_back(io::rule_from(r, iface));
    std::optional<FsmEnvironment> env;
    if (!f.env.empty()) env = ws.environment(f.env);
    config["rules"] = f.rules;
    config["uniform"] = !env.has_value();
    auto v = check_sigma_generates(basis, rules, lambda, env ? &*env : nullptr, !env.has_value());
    emit(f, command, config, {{"verdict", io::to_json(v, iface)}});
  } else if (command == "check-reaches") {
    auto agent = ws.agent(f.agent, f.name, f.index);
    auto basis = ws.agents(f.basis);
    auto env = ws.environment(f.env);
    Modality m = parse_modality(f.modality);
    ReachOptions options;
    if (f.watch) options.watch_length = f.watch;
    config["modality"] = to_string(m);
    auto v = check_reaches(agent, basis, env, m, options);
    emit(f, command, config, {{"modality", to_string(m)}, {"verdict", io::to_json(v, env.interface())}});
  } else if (command == "construct-basis") {
    auto agent = ws.agent(f.agent, f.name, f.index);
    auto env = ws.environment(f.env);
    if (!f.horizon) throw SpecError("--horizon is required");
    auto basis = construct_generating_basis(agent, env, f.k, f.horizon);
    Json set = io::agent_set_json(env.interface(), std::span<const TableAgent>(basis));
    set["semantics"] = "bounded@" + std::to_string(f.horizon);
    emit(f, set.dump(2));
  } else if (command == "rank") {
    auto target = ws.agents(f.target);
    auto pool = ws.agents(f.pool);
    config["target"] = f.target;
    config["pool"] = f.pool;
    auto r = rank_over_pool(target, pool);
    Json dups = Json::array();
    for (auto [i, j] : r.duplicates) dups.push_back({agent_id(pool, i), agent_id(pool, j)});
    emit(f, command, config,
         {{"rank", r.rank},
          {"witness", ids(pool, r.witness_indices)},
          {"exhausted", r.exhausted},
          {"refuted_sizes", r.refuted_sizes},
          {"duplicates", std::move(dups)},
          {"semantics", "exact"}});
  } else if (command == "minimal") {
    auto basis = ws.agents(f.basis);
    std::vector<FsmAgent> pool;
    if (!f.pool.empty()) pool = ws.agents(f.pool);
    config["pool"] = f.pool;
    emit(f, command, config, {{"minimal", is_minimal_over_pool(basis, pool)}, {"semantics", "exact"}});
  } else if (command == "universal-fragment") {
    auto basis = ws.agents(f.basis);
    const Interface& iface = basis[0].interface();
    auto m = menu(f, iface);
    std::optional<std::size_t> depth;
    if (f.depth) depth = f.depth;
    config["menu"] = f.menu;
    auto v = is_universal_fragment(basis, iface, m, depth);
    emit(f, command, config, {{"verdict", io::to_json(v, iface)}});
  } else if (command == "relate") {
    if (f.orthogonal == f.parallel) throw SpecError("pick exactly one of --orthogonal, --parallel");
    auto b1 = ws.agents(f.first);
    auto b2 = ws.agents(f.second);
    config["first"] = f.first;
    config["second"] = f.second;
    config["relation"] = f.orthogonal ? "orthogonal" : "parallel";
    auto v = f.orthogonal ? are_orthogonal(b1, b2) : are_parallel(b1, b2);
    emit(f, command, config, {{"relation", config["relation"]}, {"verdict", io::to_json(v, b1[0].interface())}});
  } else if (command == "value") {
    auto agent = ws.agent(f.agent, f.name, f.index);
    auto env = ws.environment(f.env);
    auto perf = performance(f);
    History from;
    if (!f.from.empty()) {
      try {
        from = io::history_from(Json::parse(f.from), env.interface());
      } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("--from is not JSON: ") + e.what());
      }
    }
    config["performance"] = io::to_json(perf);
    config["from"] = io::to_json(from, env.interface());
    auto v = compute_value(agent, env, perf, from, truncation(f));
    emit(f, command, config, {{"value", io::to_json(v)}, {"approx", v.get_d()}, {"semantics", "exact"}});
  } else if (command == "optimal") {
    auto agents = ws.agents(f.agents);
    auto env = ws.environment(f.env);
    auto perf = performance(f);
    config["performance"] = io::to_json(perf);
    auto r = optimal_agents(agents, env, perf, truncation(f));
    Json values = Json::array();
    for (std::size_t i = 0; i < agents.size(); ++i) {
      values.push_back({{"id", agent_id(agents, i)}, {"value", io::to_json(r.values[i])},
                        {"approx", r.values[i].get_d()}});
    }
    emit(f, command, config, {{"optimal", ids(agents, r.optimal)}, {"values", std::move(values)}});
  } else if (command == "classify-crl") {
    auto inst = ws.instance(f.instance);
    config["performance"] = io::to_json(inst.perf);
    emit(f, command, config, io::to_json(classify_crl(inst), inst));
  } else if (command == "augment-crl") {
    auto inst = ws.instance(f.instance);
    auto augmented = augment_with_optimal(inst);
    std::vector<FsmAgent> added(augmented.basis.begin() + static_cast<long>(inst.basis.size()),
                                augmented.basis.end());
    Json added_ids = Json::array();
    for (std::size_t i = 0; i < added.size(); ++i) added_ids.push_back(agent_id(added, i));
    if (!f.save.empty()) {
      std::ofstream out(f.save);
      if (!out) throw Error("cannot write '" + f.save + "'");
      out << io::to_json(augmented).dump(2) << '\n';
      config["save"] = f.save;
    }
    emit(f, command, config,
         {{"added", std::move(added_ids)},
          {"before", io::to_json(classify_crl(inst), inst)},
          {"after", io::to_json(classify_crl(augmented), augmented)}});
  } else if (command == "replans") {
    auto inst = ws.instance(f.instance);
    FsmEnvironment model = f.model.empty() ? inst.env : ws.environment(f.model);
    if (!f.horizon) throw SpecError("--horizon is required");
    config["model"] = f.model.empty() ? "instance environment" : f.model;
    config["horizon"] = f.horizon;
    auto rule = make_model_based_rule(inst.basis, model, inst.perf);
    auto r = count_replans(rule, inst.env, f.horizon);
    Json result = io::to_json(r, inst.env.interface());
    result["rule_states"] = rule.num_states();
    result["semantics"] = "exact";
    emit(f, command, config, std::move(result));
  } else if (command == "build-suite") {
    config["kind"] = f.kind;
    if (f.kind == "gridworld") {
      GridworldOptions o;
      o.width = f.width;
      o.height = f.height;
      o.count = f.count;
      o.walls = f.walls;
      o.seed = f.seed;
      o.p_switch = parse_rational(f.p_switch.empty() ? "1/1000" : f.p_switch);
      auto suite = build_gridworld_suite(o);
      Json j = io::to_json(suite.spec, suite.layouts);
      j["generator"] = {{"width", o.width}, {"height", o.height}, {"count", o.count},
                        {"walls", o.walls}, {"seed", o.seed}, {"attempts", suite.attempts},
                        {"unique_optimal", suite.unique_optimal},
                        {"policy_gamma", io::to_json(o.gamma)}};
      emit(f, j.dump(2));
    } else if (f.kind == "toy") {
      auto toy = two_phase_toy(parse_rational(f.p_switch.empty() ? "1/10" : f.p_switch));
      Json j = io::to_json(toy.instance);
      j["environment"] = io::to_json(toy.spec);
      emit(f, j.dump(2));
    } else if (f.kind == "csl-flip" || f.kind == "csl-majority") {
      auto schedule = f.kind == "csl-flip" ? csl_flip_schedule(f.period) : csl_majority_schedule();
      auto inst = csl_instance(schedule, f.period, f.horizon ? f.horizon : 4 * f.period);
      Json j = io::to_json(inst);
      j["environment"] = io::to_json(schedule);
      emit(f, j.dump(2));
    } else {
      throw SpecError("--kind must be gridworld, toy, csl-flip or csl-majority");
    }
  } else if (command == "describe") {
    const Json& j = ws.json(f.suite);
    auto spec = io::switching_from(j);
    auto layouts = io::layouts_from(j);
    if (layouts.empty()) throw SpecError("'" + f.suite + "' has no gridworld layouts");
    std::ostringstream text;
    for (std::size_t i = 0; i < layouts.size(); ++i) {
      auto sol = solve_mdp(spec.mdps[i], make_rational(19, 20));
      text << spec.mdps[i].name << (sol.unique ? "" : " (optimal policy not unique)") << '\n'
           << describe(layouts[i]) << "policy:\n" << describe(layouts[i], sol.policy) << '\n';
    }
    emit(f, text.str());
  } else if (command == "run-qlearning" || command == "compare") {
    auto spec = io::switching_from(ws.json(f.suite));
    auto options = experiment(f);
    std::vector<QLearnerConfig> configs;
    if (!f.configs.empty()) {
      for (const auto& c : ws.json(f.configs)) configs.push_back(io::config_from(c));
    } else if (command == "compare") {
      QLearnerConfig annealed = learner(f);
      annealed.annealing = Annealing::harmonic;
      annealed.id = "annealed";
      QLearnerConfig continual = learner(f);
      continual.annealing = Annealing::none;
      continual.id = "continual";
      configs = {annealed, continual};
    } else {
      configs = {learner(f)};
    }
    if (command == "run-qlearning" && configs.size() != 1) {
      throw SpecError("run-qlearning takes one config; use compare for several");
    }
    config["suite"] = f.suite;
    config["p_switch"] = io::to_json(spec.p_switch);
    config["options"] = io::to_json(options);
    config["rng"] = kRngDescription;
    std::vector<RunStats> stats;
    std::vector<Difference> diffs;
    if (command == "compare") {
      auto cmp = compare_variants(spec, configs, options);
      stats = std::move(cmp.stats);
      diffs = std::move(cmp.differences);
    } else {
      stats.push_back(run_q_learning(spec, configs[0], options));
    }
    if (f.format == "csv") {
      std::string csv = to_csv(stats);
      if (!diffs.empty()) csv += to_csv(diffs).substr(csv.find('\n') + 1);
      emit(f, csv);
    } else if (f.format == "json") {
      Json manifests = Json::array();
      for (const auto& s : stats) manifests.push_back(io::manifest(s));
      Json result{{"runs", std::move(manifests)}};
      if (!diffs.empty()) {
        Json dj = Json::array();
        for (const auto& d : diffs) {
          Json bins = Json::array();
          for (std::size_t b = 0; b < d.mean.size(); ++b) {
            bins.push_back({{"bin_start", d.bin_start[b]}, {"mean", d.mean[b]}, {"ci_half", d.ci_half[b]}});
          }
          dj.push_back({{"difference", d.minuend + " - " + d.subtrahend}, {"bins", std::move(bins)}});
        }
        result["differences"] = std::move(dj);
      }
      emit(f, command, config, std::move(result));
    } else {
      throw SpecError("--format must be json or csv");
    }
  } else if (command == "selftest") {
    return cli::run_selftest(std::cout) ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact checks for agent bases, reachability and continual-learning instances, plus the\n"
      "switching-gridworld Q-learning experiment.\n\n"
      "Spec files are JSON. Relative paths not found from the working directory are looked up\n"
      "under $CRL_WORKSPACE. An agent-set reference may be file.json#name to pick sets[name]\n"
      "from a bundle. Exit codes: 0 ran (whatever the verdict), 2 malformed input or unknown\n"
      "command, 3 failed precondition, 1 other failure.",
      "crl"};
  app.require_subcommand(1);
  Flags f;

  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto agents = [&](CLI::App* s, const char* flag, std::string& slot, const char* help) {
    s->add_option(flag, slot, help)->required();
  };
  auto pick = [&](CLI::App* s) {
    s->add_option("--name", f.name, "Agent name within the set");
    s->add_option("--index", f.index, "Agent index within the set");
  };
  auto perf = [&](CLI::App* s) {
    s->add_option("--gamma", f.gamma, "Discount factor, e.g. 9/10");
    s->add_option("--average", f.average, "Finite-horizon average over T steps");
    s->add_option("--truncation", f.truncation, "Truncation depth for discounted table agents");
  };
  auto output = [&](CLI::App* s) { s->add_option("--out", f.out, "Write the report to a file"); };

  auto* s = sub("check-generates", "Does the basis generate the agents in the environment?");
  agents(s, "--basis", f.basis, "Basis agent set");
  agents(s, "--agents", f.agents, "Target agent set");
  agents(s, "--env", f.env, "Environment");
  output(s);

  s = sub("check-uniform-generates", "Does the basis generate the agents at every history?");
  agents(s, "--basis", f.basis, "Basis agent set");
  agents(s, "--agents", f.agents, "Target agent set");
  output(s);

  s = sub("check-sigma-generates", "Do the given learning rules reproduce the agents?");
  agents(s, "--basis", f.basis, "Basis agent set");
  agents(s, "--agents", f.agents, "Target agent set");
  agents(s, "--rules", f.rules, "Learning rules file {interface, rules}");
  s->add_option("--env", f.env, "Environment (omit for all histories)");
  output(s);

  s = sub("check-reaches", "Sometimes / never / always reaches");
  agents(s, "--agent", f.agent, "Agent set holding the agent");
  pick(s);
  agents(s, "--basis", f.basis, "Basis agent set");
  agents(s, "--env", f.env, "Environment");
  s->add_option("--modality", f.modality, "sometimes, never or always")
      ->check(CLI::IsMember({"sometimes", "never", "always"}));
  s->add_option("--watch", f.watch, "Watch-prefix length for bounded agents");
  output(s);

  s = sub("construct-basis", "Build a k-member basis that generates the agent but excludes it");
  agents(s, "--agent", f.agent, "Agent set holding the agent");
  pick(s);
  agents(s, "--env", f.env, "Environment");
  s->add_option("--k", f.k, "Basis size")->required();
  s->add_option("--horizon", f.horizon, "Table horizon T")->required();
  output(s);

  s = sub("rank", "Smallest pool subset uniformly generating the target");
  agents(s, "--target", f.target, "Target agent set");
  agents(s, "--pool", f.pool, "Candidate pool");
  output(s);

  s = sub("minimal", "Is the basis minimal over the pool?");
  agents(s, "--basis", f.basis, "Basis agent set");
  s->add_option("--pool", f.pool, "Candidate pool");
  output(s);

  s = sub("universal-fragment", "Does the basis emit every menu distribution everywhere?");
  agents(s, "--basis", f.basis, "Basis agent set");
  s->add_option("--menu", f.menu, "default (point masses + uniform) or point");
  s->add_option("--depth", f.depth, "Depth bound");
  output(s);

  s = sub("relate", "Orthogonality or parallelism of two bases");
  agents(s, "--first", f.first, "First basis");
  agents(s, "--second", f.second, "Second basis");
  s->add_flag("--orthogonal", f.orthogonal, "Check orthogonality");
  s->add_flag("--parallel", f.parallel, "Check parallelism");
  output(s);

  s = sub("value", "Exact value of an agent");
  agents(s, "--agent", f.agent, "Agent set holding the agent");
  pick(s);
  agents(s, "--env", f.env, "Environment");
  perf(s);
  s->add_option("--from", f.from, "History as JSON, e.g. [[\"a0\",\"o1\"]]");
  output(s);

  s = sub("optimal", "Values and every maximizer");
  agents(s, "--agents", f.agents, "Agent set");
  agents(s, "--env", f.env, "Environment");
  perf(s);
  output(s);

  s = sub("classify-crl", "Is the instance a continual learning problem?");
  agents(s, "--instance", f.instance, "Instance file");
  output(s);

  s = sub("augment-crl", "Add every optimal agent to the basis and reclassify");
  agents(s, "--instance", f.instance, "Instance file");
  s->add_option("--save", f.save, "Write the augmented instance here");
  output(s);

  s = sub("replans", "Replanning profile of the model-based rule over the instance basis");
  agents(s, "--instance", f.instance, "Instance file");
  s->add_option("--model", f.model, "Model environment (default: the instance environment)");
  s->add_option("--horizon", f.horizon, "Depth T")->required();
  output(s);

  s = sub("build-suite", "Emit a gridworld suite, the two-phase toy, or a CSL instance");
  s->add_option("--kind", f.kind, "gridworld, toy, csl-flip or csl-majority");
  s->add_option("--width", f.width, "Grid width");
  s->add_option("--height", f.height, "Grid height");
  s->add_option("--count", f.count, "Number of gridworlds");
  s->add_option("--walls", f.walls, "Walls per gridworld");
  s->add_option("--p-switch", f.p_switch, "Switch probability (default 1/1000; toy 1/10)");
  s->add_option("--period", f.period, "CSL phase length");
  s->add_option("--horizon", f.horizon, "CSL average-reward horizon (default 4 periods)");
  s->add_option("--seed", f.seed, "Generator seed");
  output(s);

  s = sub("describe", "ASCII maps and optimal policies of a gridworld suite");
  agents(s, "--suite", f.suite, "Suite file from build-suite");
  output(s);

  for (const char* name : {"run-qlearning", "compare"}) {
    s = sub(name, std::string(name) == "compare"
                      ? "Continual vs annealed Q-learning (or --configs) on common random numbers"
                      : "Epsilon-greedy tabular Q-learning on a switching suite");
    agents(s, "--suite", f.suite, "Switching spec file");
    s->add_option("--configs", f.configs, "JSON list of learner configs");
    s->add_option("--epsilon", f.epsilon, "Exploration rate");
    s->add_option("--alpha", f.alpha, "Step size (initial step size when annealed)");
    s->add_option("--anneal", f.anneal, "none or harmonic");
    s->add_option("--kappa", f.kappa, "Harmonic annealing constant");
    s->add_option("--discount", f.q_gamma, "Learner discount");
    s->add_option("--initial-q", f.initial_q, "Initial Q-value");
    s->add_option("--steps", f.steps, "Steps per run");
    s->add_option("--runs", f.runs, "Runs");
    s->add_option("--bin", f.bin, "Bin width in steps");
    s->add_option("--cap", f.cap, "Episode step cap");
    s->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    s->add_option("--seed", f.seed, "Master seed");
    s->add_option("--format", f.format, "json or csv");
    output(s);
  }

  sub("selftest", "Run the bundled property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kMalformed;
  }

  std::string command = app.get_subcommands().front()->get_name();
  cli::Workspace ws;
  try {
    return run(command, f, ws);
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return kPrecondition;
  } catch (const SpecError& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const InterfaceMismatch& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
