#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace crl {

/// Finite action and observation alphabets shared by agents and environments.
class Interface {
 public:
  Interface(std::vector<std::string> actions, std::vector<std::string> observations);

  /// Alphabets named a0..a{n-1} and o0..o{m-1}.
  static Interface numbered(std::size_t num_actions, std::size_t num_observations);

  std::size_t num_actions() const { return actions_.size(); }
  std::size_t num_observations() const { return observations_.size(); }
  const std::string& action(std::size_t index) const;
  const std::string& observation(std::size_t index) const;
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& observations() const { return observations_; }

  std::size_t action_index(std::string_view name) const;
  std::size_t observation_index(std::string_view name) const;

  bool operator==(const Interface&) const = default;

 private:
  std::vector<std::string> actions_;
  std::vector<std::string> observations_;
};

struct Step {
  std::size_t action = 0;
  std::size_t observation = 0;

  auto operator<=>(const Step&) const = default;
};

/// A finite action-observation sequence; the empty history is h0.
///
/// Ordering is the canonical one used throughout the library: shorter
/// histories first, then lexicographic by (action index, observation index).
class History {
 public:
  History() = default;
  explicit History(std::vector<Step> steps) : steps_(std::move(steps)) {}
  History(std::initializer_list<Step> steps) : steps_(steps) {}

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  const Step& operator[](std::size_t i) const { return steps_[i]; }
  auto begin() const { return steps_.begin(); }
  auto end() const { return steps_.end(); }
  const std::vector<Step>& steps() const { return steps_; }

  History extended(Step step) const;
  History concat(const History& suffix) const;
  History prefix(std::size_t length) const;
  /// Steps after the first `length`.
  History suffix_after(std::size_t length) const;
  bool has_prefix(const History& prefix) const;

  bool operator==(const History&) const = default;
  std::strong_ordering operator<=>(const History& other) const;

 private:
  std::vector<Step> steps_;
};

/// Throws InterfaceMismatch when a symbol index is outside the alphabets.
void validate(const History& history, const Interface& iface);

std::string to_string(const History& history, const Interface& iface);

/// All histories of length <= max_length over the interface, canonical order.
std::vector<History> all_histories(const Interface& iface, std::size_t max_length);

}  // namespace crl
