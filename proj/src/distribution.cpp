#include "crl/distribution.hpp"

#include "crl/errors.hpp"
#include "crl/interface.hpp"

namespace crl {

ActionDistribution::ActionDistribution(std::vector<Rational> probabilities)
    : probs_(std::move(probabilities)) {
  if (probs_.empty()) throw SpecError("empty action distribution");
  Rational total = 0;
  for (auto& p : probs_) {
    p.canonicalize();
    if (p < 0) throw SpecError("negative action probability " + p.get_str());
    total += p;
  }
  if (total != 1) throw SpecError("action probabilities sum to " + total.get_str() + ", not 1");
}

ActionDistribution ActionDistribution::point_mass(std::size_t num_actions, std::size_t action) {
  if (action >= num_actions) throw InterfaceMismatch("point mass outside the action alphabet");
  std::vector<Rational> probs(num_actions, Rational(0));
  probs[action] = 1;
  return ActionDistribution(std::move(probs));
}

ActionDistribution ActionDistribution::uniform(std::size_t num_actions) {
  return ActionDistribution(
      std::vector<Rational>(num_actions, Rational(1, static_cast<unsigned long>(num_actions))));
}

ActionDistribution ActionDistribution::rotated() const {
  std::vector<Rational> out(probs_.size());
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    out[(i + 1) % probs_.size()] = probs_[i];
  }
  return ActionDistribution(std::move(out));
}

std::string to_string(const ActionDistribution& dist, const Interface& iface) {
  for (std::size_t a = 0; a < dist.size(); ++a) {
    if (dist[a] == 1) return iface.action(a);
  }
  std::string out = "{";
  bool first = true;
  for (std::size_t a = 0; a < dist.size(); ++a) {
    if (dist[a] == 0) continue;
    if (!first) out += ", ";
    first = false;
    out += iface.action(a) + ": " + dist[a].get_str();
  }
  return out + "}";
}

int DistributionIndex::intern(const ActionDistribution& dist) {
  auto [it, inserted] = ids_.emplace(dist, static_cast<int>(by_id_.size()));
  if (inserted) by_id_.push_back(&it->first);
  return it->second;
}

}  // namespace crl
