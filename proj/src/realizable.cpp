#include "crl/realizable.hpp"

#include "crl/errors.hpp"

namespace crl {

std::vector<History> enumerate_paths(const ProductGraph& graph, std::size_t from,
                                     std::size_t max_length) {
  std::vector<History> out;
  std::vector<std::pair<History, std::size_t>> layer{{History{}, from}};
  for (std::size_t len = 0;; ++len) {
    for (const auto& [h, node] : layer) out.push_back(h);
    if (len == max_length) break;
    std::vector<std::pair<History, std::size_t>> next;
    for (const auto& [h, node] : layer) {
      for (const auto& e : graph.edges(node)) next.emplace_back(h.extended(e.label), e.target);
    }
    if (next.empty()) break;
    layer = std::move(next);
  }
  return out;
}

std::vector<History> realizable_histories(const FsmAgent& agent, const FsmEnvironment& env,
                                          std::size_t max_length) {
  FsmAgent participants[] = {agent};
  auto graph = product_reachable(participants, env);
  return enumerate_paths(graph, 0, max_length);
}

std::vector<History> realizable_suffixes(const FsmAgent& agent, const FsmEnvironment& env,
                                         const History& prefix, std::size_t max_length) {
  validate(prefix, env.interface());
  FsmAgent participants[] = {agent};
  auto graph = product_reachable(participants, env);
  std::size_t node = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    auto next = graph.successor(node, prefix[i]);
    if (!next) {
      throw PreconditionError("history is not realizable: step " + std::to_string(i + 1) + " (" +
                              env.interface().action(prefix[i].action) + "," +
                              env.interface().observation(prefix[i].observation) +
                              ") has probability zero");
    }
    node = *next;
  }
  if (prefix.size() > max_length) return {};
  return enumerate_paths(graph, node, max_length - prefix.size());
}

}  // namespace crl
