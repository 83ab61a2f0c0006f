#include "crl/basis_analysis.hpp"

#include <algorithm>
#include <set>

#include "crl/errors.hpp"
#include "crl/product.hpp"

namespace crl {

namespace {

/// Advances `idx` to the next k-combination of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<FsmAgent> select(std::span<const FsmAgent> pool, const std::vector<std::size_t>& idx) {
  std::vector<FsmAgent> out;
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

/// First subset of size `k` (lexicographic) uniformly generating target.
std::optional<std::vector<std::size_t>> generating_subset(std::span<const FsmAgent> pool,
                                                          std::size_t k,
                                                          std::span<const FsmAgent> target) {
  if (k == 0 || k > pool.size()) return std::nullopt;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  do {
    if (check_uniform_generates(select(pool, idx), target).holds) return idx;
  } while (next_combination(idx, pool.size()));
  return std::nullopt;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> duplicate_pairs(std::span<const FsmAgent> agents) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j)
      if (behaviorally_equal(agents[i], agents[j]).holds) out.emplace_back(i, j);
  return out;
}

RankResult rank_over_pool(std::span<const FsmAgent> target, std::span<const FsmAgent> pool) {
  if (pool.empty()) throw PreconditionError("candidate pool is empty");
  if (target.empty()) throw PreconditionError("target agent set is empty");
  RankResult result;
  result.duplicates = duplicate_pairs(pool);
  for (std::size_t k = 1; k <= pool.size(); ++k) {
    if (auto idx = generating_subset(pool, k, target)) {
      result.rank = k;
      result.witness_indices = *idx;
      result.witness_basis = select(pool, *idx);
      result.exhausted = true;
      return result;
    }
    result.refuted_sizes.push_back(k);
  }
  throw PreconditionError("no subset of the pool uniformly generates the target");
}

bool is_minimal_over_pool(std::span<const FsmAgent> basis, std::span<const FsmAgent> pool) {
  std::vector<FsmAgent> candidates(pool.begin(), pool.end());
  candidates.insert(candidates.end(), basis.begin(), basis.end());
  for (std::size_t k = 1; k < basis.size(); ++k) {
    if (generating_subset(candidates, k, basis)) return false;
  }
  return true;
}

Verdict is_universal_fragment(std::span<const FsmAgent> basis, const Interface& iface,
                              std::span<const ActionDistribution> menu,
                              std::optional<std::size_t> depth) {
  if (menu.empty()) throw PreconditionError("distribution menu is empty");
  if (basis.empty()) throw Error("an agent basis must be non-empty");
  require_interface(basis, iface);
  auto graph = product_uniform(basis);
  Verdict v;
  v.holds = true;
  if (depth && *depth < graph.max_depth()) v.horizon = depth;
  if (auto h = min_horizon(basis)) v.horizon = std::min(v.horizon.value_or(*h), *h);
  for (std::size_t n = 0; n < graph.size() && v.holds; ++n) {
    const auto& node = graph.node(n);
    if (v.horizon && node.depth > *v.horizon) continue;
    for (const auto& d : menu) {
      bool emitted = false;
      for (std::size_t m = 0; m < basis.size() && !emitted; ++m) {
        emitted = basis[m].output(node.machine_states[m]) == d;
      }
      if (!emitted) {
        v.holds = false;
        v.witness = graph.history_to(n);
        break;
      }
    }
  }
  return v;
}

Verdict are_orthogonal(std::span<const FsmAgent> b1, std::span<const FsmAgent> b2) {
  if (b1.empty() || b2.empty()) throw Error("an agent basis must be non-empty");
  std::vector<FsmAgent> all(b1.begin(), b1.end());
  all.insert(all.end(), b2.begin(), b2.end());
  require_interface(all, b1[0].interface());
  auto graph = product_uniform(all);
  Verdict v;
  v.horizon = min_horizon(all);
  for (std::size_t n = 0; n < graph.size(); ++n) {
    const auto& node = graph.node(n);
    if (v.horizon && node.depth > *v.horizon) continue;
    std::set<ActionDistribution> first;
    for (std::size_t m = 0; m < b1.size(); ++m) first.insert(all[m].output(node.machine_states[m]));
    bool shared = false;
    for (std::size_t m = b1.size(); m < all.size() && !shared; ++m) {
      shared = first.count(all[m].output(node.machine_states[m])) > 0;
    }
    if (!shared) {
      v.holds = true;
      v.witness = graph.history_to(n);
      return v;
    }
  }
  v.holds = false;
  return v;
}

Verdict are_parallel(std::span<const FsmAgent> b1, std::span<const FsmAgent> b2) {
  auto forward = check_uniform_generates(b1, b2);
  if (!forward.holds) return forward;
  auto backward = check_uniform_generates(b2, b1);
  if (!backward.holds) return backward;
  Verdict v;
  v.holds = true;
  v.horizon = forward.horizon ? forward.horizon : backward.horizon;
  return v;
}

}  // namespace crl
