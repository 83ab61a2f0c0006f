#include "crl/interface.hpp"

#include <algorithm>
#include <set>

#include "crl/errors.hpp"

namespace crl {

namespace {

void require_unique(const std::vector<std::string>& symbols, const char* what) {
  std::set<std::string> seen(symbols.begin(), symbols.end());
  if (seen.size() != symbols.size()) {
    throw SpecError(std::string("duplicate symbol in ") + what);
  }
}

std::size_t index_in(const std::vector<std::string>& symbols, std::string_view name,
                     const char* what) {
  auto it = std::find(symbols.begin(), symbols.end(), name);
  if (it == symbols.end()) {
    throw InterfaceMismatch(std::string("unknown ") + what + " '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - symbols.begin());
}

}  // namespace

Interface::Interface(std::vector<std::string> actions, std::vector<std::string> observations)
    : actions_(std::move(actions)), observations_(std::move(observations)) {
  if (actions_.size() < 2) {
    throw SpecError("an interface needs at least two actions");
  }
  if (observations_.empty()) {
    throw SpecError("an interface needs at least one observation");
  }
  require_unique(actions_, "actions");
  require_unique(observations_, "observations");
}

Interface Interface::numbered(std::size_t num_actions, std::size_t num_observations) {
  std::vector<std::string> actions, observations;
  for (std::size_t i = 0; i < num_actions; ++i) actions.push_back("a" + std::to_string(i));
  for (std::size_t i = 0; i < num_observations; ++i) observations.push_back("o" + std::to_string(i));
  return Interface(std::move(actions), std::move(observations));
}

const std::string& Interface::action(std::size_t index) const {
  if (index >= actions_.size()) throw InterfaceMismatch("action index out of range");
  return actions_[index];
}

const std::string& Interface::observation(std::size_t index) const {
  if (index >= observations_.size()) throw InterfaceMismatch("observation index out of range");
  return observations_[index];
}

std::size_t Interface::action_index(std::string_view name) const {
  return index_in(actions_, name, "action");
}

std::size_t Interface::observation_index(std::string_view name) const {
  return index_in(observations_, name, "observation");
}

History History::extended(Step step) const {
  History out = *this;
  out.steps_.push_back(step);
  return out;
}

History History::concat(const History& suffix) const {
  History out = *this;
  out.steps_.insert(out.steps_.end(), suffix.steps_.begin(), suffix.steps_.end());
  return out;
}

History History::prefix(std::size_t length) const {
  length = std::min(length, steps_.size());
  return History(std::vector<Step>(steps_.begin(), steps_.begin() + static_cast<long>(length)));
}

History History::suffix_after(std::size_t length) const {
  length = std::min(length, steps_.size());
  return History(std::vector<Step>(steps_.begin() + static_cast<long>(length), steps_.end()));
}

bool History::has_prefix(const History& prefix) const {
  return prefix.size() <= size() && std::equal(prefix.begin(), prefix.end(), steps_.begin());
}

std::strong_ordering History::operator<=>(const History& other) const {
  if (auto c = steps_.size() <=> other.steps_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(steps_.begin(), steps_.end(),
                                                other.steps_.begin(), other.steps_.end());
}

void validate(const History& history, const Interface& iface) {
  for (std::size_t t = 0; t < history.size(); ++t) {
    if (history[t].action >= iface.num_actions() ||
        history[t].observation >= iface.num_observations()) {
      throw InterfaceMismatch("history step " + std::to_string(t) + " is outside the interface");
    }
  }
}

std::string to_string(const History& history, const Interface& iface) {
  if (history.empty()) return "h0";
  std::string out;
  for (const auto& step : history) {
    if (!out.empty()) out += ' ';
    out += iface.action(step.action);
    out += ',';
    out += iface.observation(step.observation);
  }
  return out;
}

std::vector<History> all_histories(const Interface& iface, std::size_t max_length) {
  std::vector<History> out{History{}};
  std::size_t layer_begin = 0;
  for (std::size_t len = 0; len < max_length; ++len) {
    std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t a = 0; a < iface.num_actions(); ++a) {
        for (std::size_t o = 0; o < iface.num_observations(); ++o) {
          out.push_back(out[i].extended({a, o}));
        }
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

}  // namespace crl
