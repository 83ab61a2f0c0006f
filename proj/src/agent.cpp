#include "crl/agent.hpp"

#include "crl/errors.hpp"

namespace crl {

FsmAgent::FsmAgent(Interface iface, std::vector<ActionDistribution> outputs,
                   std::vector<std::size_t> transitions, std::size_t initial, std::string name)
    : iface_(std::move(iface)),
      machine_(iface_.num_actions(), iface_.num_observations(), outputs.size(), initial,
               std::move(transitions)),
      outputs_(std::move(outputs)),
      name_(std::move(name)) {
  for (const auto& out : outputs_) {
    if (out.size() != iface_.num_actions()) {
      throw InterfaceMismatch("agent output does not match the action alphabet");
    }
  }
}

FsmAgent FsmAgent::constant(const Interface& iface, ActionDistribution dist, std::string name) {
  std::vector<std::size_t> transitions(iface.num_actions() * iface.num_observations(), 0);
  return FsmAgent(iface, {std::move(dist)}, std::move(transitions), 0, std::move(name));
}

FsmAgent FsmAgent::constant(const Interface& iface, std::size_t action, std::string name) {
  return constant(iface, ActionDistribution::point_mass(iface.num_actions(), action),
                  std::move(name));
}

std::size_t FsmAgent::state_after(const History& history) const {
  validate(history, iface_);
  return machine_.run(history);
}

FsmAgent& FsmAgent::set_name(std::string name) {
  name_ = std::move(name);
  return *this;
}

FsmAgent& FsmAgent::set_horizon(std::optional<std::size_t> horizon) {
  horizon_ = horizon;
  return *this;
}

TableAgent::TableAgent(Interface iface, std::size_t horizon, const Rule& rule,
                       ActionDistribution fallback, std::string name)
    : iface_(std::move(iface)),
      horizon_(horizon),
      histories_(all_histories(iface_, horizon)),
      fallback_(std::move(fallback)),
      name_(std::move(name)) {
  if (fallback_.size() != iface_.num_actions()) {
    throw InterfaceMismatch("fallback distribution does not match the action alphabet");
  }
  entries_.reserve(histories_.size());
  for (const auto& h : histories_) {
    auto dist = rule(h);
    if (dist.size() != iface_.num_actions()) {
      throw InterfaceMismatch("table entry does not match the action alphabet");
    }
    entries_.push_back(std::move(dist));
  }
  std::size_t branching = iface_.num_actions() * iface_.num_observations();
  std::size_t start = 0, layer = 1;
  for (std::size_t len = 0; len <= horizon_; ++len) {
    first_of_length_.push_back(start);
    start += layer;
    layer *= branching;
  }
}

std::size_t TableAgent::index_of(const History& history) const {
  std::size_t digit_base = iface_.num_observations();
  std::size_t offset = 0;
  for (const auto& step : history) {
    offset = offset * iface_.num_actions() * digit_base + step.action * digit_base + step.observation;
  }
  return first_of_length_[history.size()] + offset;
}

const ActionDistribution& TableAgent::operator()(const History& history) const {
  validate(history, iface_);
  if (history.size() > horizon_) return fallback_;
  return entries_[index_of(history)];
}

FsmAgent TableAgent::compile() const {
  const std::size_t A = iface_.num_actions();
  const std::size_t O = iface_.num_observations();
  const std::size_t sink = histories_.size();
  std::vector<std::size_t> transitions((sink + 1) * A * O, sink);
  for (std::size_t i = 0; i < histories_.size(); ++i) {
    if (histories_[i].size() == horizon_) continue;
    for (std::size_t a = 0; a < A; ++a) {
      for (std::size_t o = 0; o < O; ++o) {
        transitions[(i * A + a) * O + o] = index_of(histories_[i].extended({a, o}));
      }
    }
  }
  std::vector<ActionDistribution> outputs = entries_;
  outputs.push_back(fallback_);
  FsmAgent agent(iface_, std::move(outputs), std::move(transitions), 0, name_);
  agent.horizon_ = horizon_;
  return agent;
}

const ActionDistribution& run_agent(const FsmAgent& agent, const History& history) {
  return agent.output(agent.state_after(history));
}

const ActionDistribution& run_agent(const TableAgent& agent, const History& history) {
  return agent(history);
}

}  // namespace crl
