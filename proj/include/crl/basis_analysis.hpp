#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crl/agent.hpp"
#include "crl/operators.hpp"

namespace crl {

/// Pool-relative rank: the smallest pool subset uniformly generating a target.
struct RankResult {
  std::size_t rank = 0;
  /// Pool indices of the witness, ascending.
  std::vector<std::size_t> witness_indices;
  std::vector<FsmAgent> witness_basis;
  /// Every subset smaller than `rank` was checked and refuted.
  bool exhausted = false;
  std::vector<std::size_t> refuted_sizes;
  /// Behaviorally identical pool members (i < j).
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;
};

/// Subsets are tried by size, then in lexicographic index order; the first one
/// that uniformly generates `target` wins. Throws PreconditionError when no
/// pool subset does.
RankResult rank_over_pool(std::span<const FsmAgent> target, std::span<const FsmAgent> pool);

/// True iff no subset smaller than the basis, drawn from pool and basis
/// together, uniformly generates the basis.
bool is_minimal_over_pool(std::span<const FsmAgent> basis, std::span<const FsmAgent> pool);

/// Pairs of behaviorally identical agents.
std::vector<std::pair<std::size_t, std::size_t>> duplicate_pairs(std::span<const FsmAgent> agents);

/// Every menu distribution is emitted by some member at every joint basis
/// state reachable within `depth` steps (all reachable states when `depth` is
/// unset or at least the product depth; then the verdict is exact).
Verdict is_universal_fragment(std::span<const FsmAgent> basis, const Interface& iface,
                              std::span<const ActionDistribution> menu,
                              std::optional<std::size_t> depth = std::nullopt);

/// Some joint state has disjoint output sets. Witness = first such history.
Verdict are_orthogonal(std::span<const FsmAgent> b1, std::span<const FsmAgent> b2);

/// Mutual uniform generation. Witness from the first failing direction.
Verdict are_parallel(std::span<const FsmAgent> b1, std::span<const FsmAgent> b2);

}  // namespace crl
