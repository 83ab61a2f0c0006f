#include "crl/classify.hpp"

namespace crl {

std::string agent_id(const std::vector<FsmAgent>& agents, std::size_t index) {
  const auto& name = agents[index].name();
  return name.empty() ? "#" + std::to_string(index) : name;
}

namespace {

bool contains_behavior(const std::vector<FsmAgent>& set, const FsmAgent& agent) {
  for (const auto& member : set)
    if (behaviorally_equal(member, agent).holds) return true;
  return false;
}

}  // namespace

CrlReport classify_crl(const CrlInstance& instance) {
  CrlReport report;
  auto best = optimal_agents(instance.agents, instance.env, instance.perf, instance.truncation);
  report.values = std::move(best.values);
  report.optimal = std::move(best.optimal);
  report.is_crl = true;
  for (std::size_t i : report.optimal) {
    ReachEntry entry{i, agent_id(instance.agents, i),
                     check_reaches(instance.agents[i], instance.basis, instance.env,
                                   Modality::never)};
    report.is_crl = report.is_crl && entry.never.holds;
    report.reaches.push_back(std::move(entry));
  }
  report.basis_generates = check_generates(instance.basis, instance.agents, instance.env);

  bool inside = true;
  for (const auto& b : instance.basis) inside = inside && contains_behavior(instance.agents, b);
  bool extra = false;
  for (const auto& a : instance.agents) extra = extra || !contains_behavior(instance.basis, a);
  report.basis_proper_subset = inside && extra;
  return report;
}

CrlInstance augment_with_optimal(const CrlInstance& instance) {
  CrlInstance out = instance;
  auto best = optimal_agents(instance.agents, instance.env, instance.perf, instance.truncation);
  for (std::size_t i : best.optimal) {
    if (!contains_behavior(out.basis, instance.agents[i])) out.basis.push_back(instance.agents[i]);
  }
  return out;
}

}  // namespace crl
