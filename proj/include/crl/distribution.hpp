#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crl/rational.hpp"

namespace crl {

class Interface;

/// Exact probability distribution over an action alphabet.
class ActionDistribution {
 public:
  /// Throws SpecError on negative entries or when the entries do not sum to 1.
  explicit ActionDistribution(std::vector<Rational> probabilities);

  static ActionDistribution point_mass(std::size_t num_actions, std::size_t action);
  static ActionDistribution uniform(std::size_t num_actions);

  std::size_t size() const { return probs_.size(); }
  const Rational& operator[](std::size_t action) const { return probs_[action]; }
  std::span<const Rational> probabilities() const { return probs_; }
  bool in_support(std::size_t action) const { return probs_[action] > 0; }

  /// Cyclic shift: the mass of action i moves to action i+1.
  ActionDistribution rotated() const;

  bool operator==(const ActionDistribution& other) const { return probs_ == other.probs_; }
  bool operator<(const ActionDistribution& other) const { return probs_ < other.probs_; }

 private:
  std::vector<Rational> probs_;
};

/// Point masses print as the bare action name, others as {a: p, ...}.
std::string to_string(const ActionDistribution& dist, const Interface& iface);

/// Interns distributions so checks can compare outputs as integers.
class DistributionIndex {
 public:
  int intern(const ActionDistribution& dist);
  const ActionDistribution& at(int id) const { return *by_id_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return by_id_.size(); }

 private:
  std::map<ActionDistribution, int> ids_;
  std::vector<const ActionDistribution*> by_id_;
};

}  // namespace crl
