#pragma once

// JSON forms of every spec and report. Rationals are written as [num, den] and
// read from [num, den], integers, or "n/d" strings. Loaders throw SpecError
// (with the offending key) on malformed input.

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "crl/agent.hpp"
#include "crl/classify.hpp"
#include "crl/environment.hpp"
#include "crl/environments.hpp"
#include "crl/experiments.hpp"
#include "crl/model_based.hpp"
#include "crl/operators.hpp"
#include "crl/performance.hpp"

namespace crl::io {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& value);
Rational rational_from(const Json& j);

Json to_json(const Interface& iface);
Interface interface_from(const Json& j);

/// A bare action name for point masses, otherwise {action: probability}.
Json to_json(const ActionDistribution& dist, const Interface& iface);
ActionDistribution distribution_from(const Json& j, const Interface& iface);

/// [[action, observation], ...]
Json to_json(const History& history, const Interface& iface);
History history_from(const Json& j, const Interface& iface);

/// {"kind": "fsm", "name", "initial", "outputs", "transitions"[state][action][observation],
///  "horizon"?}. Loading also accepts "constant" ({"output"}) and "table"
/// ({"horizon", "fallback", "entries": [{"history", "output"}]}) agents.
Json to_json(const FsmAgent& agent);
Json to_json(const TableAgent& agent);
FsmAgent agent_from(const Json& j, const Interface& iface);

/// {"interface", "agents": [...]}
Json agent_set_json(const Interface& iface, std::span<const FsmAgent> agents);
Json agent_set_json(const Interface& iface, std::span<const TableAgent> agents);
AgentSet agent_set_from(const Json& j);

/// {"name", "initial", "transitions"[state][action][observation], "select"}
Json to_json(const LearningRuleFsm& rule);
LearningRuleFsm rule_from(const Json& j, const Interface& iface);

/// Kinds: "fsm" (explicit dynamics), "switching", "csl".
Json to_json(const FsmEnvironment& env);
FsmEnvironment environment_from(const Json& j);

Json to_json(const SwitchingSpec& spec, std::span<const GridLayout> layouts = {});
SwitchingSpec switching_from(const Json& j);
std::vector<GridLayout> layouts_from(const Json& j);

Json to_json(const CslSchedule& schedule);
CslSchedule csl_from(const Json& j);

Json to_json(const PerformanceSpec& perf);
PerformanceSpec performance_from(const Json& j);

/// {"interface", "environment", "performance", "agents", "basis", "truncation"?};
/// basis entries may name members of "agents".
Json to_json(const CrlInstance& instance);
CrlInstance instance_from(const Json& j);

/// {"holds", "semantics", "horizon"?, "witness"}
Json to_json(const Verdict& verdict, const Interface& iface);
Json to_json(const CrlReport& report, const CrlInstance& instance);
Json to_json(const ReplanReport& report, const Interface& iface);

Json to_json(const QLearnerConfig& config);
QLearnerConfig config_from(const Json& j);
Json to_json(const ExperimentOptions& options);
/// Full configuration, seed, generator and bins of a run.
Json manifest(const RunStats& stats);

/// Reads a JSON file; SpecError when missing or unparsable.
Json read_file(const std::string& path);

}  // namespace crl::io
