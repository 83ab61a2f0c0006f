#pragma once

#include <cstddef>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"
#include "crl/product.hpp"

namespace crl {

/// Histories of length <= max_length that occur with nonzero probability,
/// in canonical order. Always contains h0.
std::vector<History> realizable_histories(const FsmAgent& agent, const FsmEnvironment& env,
                                          std::size_t max_length);

/// Suffixes h' with |hh'| <= max_length and hh' realizable, canonical order.
/// Throws PreconditionError naming the first unrealizable step of `prefix`.
std::vector<History> realizable_suffixes(const FsmAgent& agent, const FsmEnvironment& env,
                                         const History& prefix, std::size_t max_length);

/// Label paths of length <= max_length starting at `from`, canonical order.
std::vector<History> enumerate_paths(const ProductGraph& graph, std::size_t from,
                                     std::size_t max_length);

}  // namespace crl
