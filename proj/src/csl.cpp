#include "crl/environments.hpp"
#include "crl/errors.hpp"

namespace crl {

void validate(const CslSchedule& s) {
  if (s.inputs.empty() || s.labels.empty()) throw SpecError("schedule needs inputs and labels");
  if (s.phases.empty()) throw SpecError("schedule needs at least one phase");
  const std::size_t cells = s.inputs.size() * s.labels.size();
  for (std::size_t i = 0; i < s.phases.size(); ++i) {
    const auto& phase = s.phases[i];
    if (phase.distribution.size() != cells) {
      throw SpecError("phase " + std::to_string(i) + " needs one probability per (input, label)");
    }
    Rational total = 0;
    for (const auto& p : phase.distribution) {
      if (p < 0) throw SpecError("negative probability in phase " + std::to_string(i));
      total += p;
    }
    if (total != 1) throw SpecError("phase " + std::to_string(i) + " sums to " + total.get_str());
    if (phase.duration && *phase.duration == 0) throw SpecError("phase durations must be positive");
    if (!phase.duration && (s.cyclic || i + 1 != s.phases.size())) {
      throw SpecError("only the last phase of a non-cyclic schedule may be unbounded");
    }
  }
  if (!s.cyclic && s.phases.back().duration) {
    throw SpecError("a non-cyclic schedule must end with an unbounded phase");
  }
}

std::size_t csl_positions(const CslSchedule& s) {
  std::size_t total = 0;
  for (const auto& phase : s.phases) total += phase.duration.value_or(1);
  return total;
}

std::size_t csl_phase_at(const CslSchedule& s, std::size_t position) {
  for (std::size_t i = 0; i < s.phases.size(); ++i) {
    std::size_t len = s.phases[i].duration.value_or(1);
    if (position < len) return i;
    position -= len;
  }
  throw Error("clock position out of range");
}

std::size_t csl_advance(const CslSchedule& s, std::size_t position) {
  std::size_t n = csl_positions(s);
  if (s.cyclic) return (position + 1) % n;
  return std::min(position + 1, n - 1);
}

Interface csl_interface(const CslSchedule& s) {
  std::vector<std::string> observations;
  for (const auto& x : s.inputs) {
    for (const auto& y : s.labels) observations.push_back(x + "|" + y);
    observations.push_back(x + "|-");
  }
  return Interface(s.labels, std::move(observations));
}

std::size_t csl_observation(const CslSchedule& s, std::size_t input,
                            std::optional<std::size_t> label) {
  const std::size_t slots = s.labels.size() + 1;
  if (input >= s.inputs.size() || (label && *label >= s.labels.size())) {
    throw InterfaceMismatch("input or label outside the schedule's alphabets");
  }
  return input * slots + label.value_or(s.labels.size());
}

FsmEnvironment build_csl_env(const CslSchedule& s) {
  validate(s);
  Interface iface = csl_interface(s);
  const std::size_t X = s.inputs.size(), Y = s.labels.size(), slots = Y + 1;
  const std::size_t positions = csl_positions(s);

  // State pos * slots + pending, where pending == Y means no label is owed.
  std::vector<std::vector<Outcome>> dynamics;
  for (std::size_t pos = 0; pos < positions; ++pos) {
    const auto& dist = s.phases[csl_phase_at(s, pos)].distribution;
    std::size_t next_pos = csl_advance(s, pos);
    for (std::size_t pending = 0; pending < slots; ++pending) {
      for (std::size_t a = 0; a < Y; ++a) {
        std::vector<Outcome> row;
        for (std::size_t x = 0; x < X; ++x) {
          for (std::size_t y = 0; y < Y; ++y) {
            row.push_back({next_pos * slots + y, x * slots + pending, dist[x * Y + y], Rational(0)});
          }
        }
        dynamics.push_back(std::move(row));
      }
    }
  }
  RewardTable rewards(Y, std::vector<Rational>(iface.num_observations(), Rational(0)));
  for (std::size_t a = 0; a < Y; ++a) {
    for (std::size_t o = 0; o < iface.num_observations(); ++o) {
      std::size_t label = o % slots;
      rewards[a][o] = label == Y ? 0 : label == a ? 1 : -1;
    }
  }
  return FsmEnvironment(std::move(iface), positions * slots, Y, std::move(dynamics),
                        std::move(rewards), "csl");
}

namespace {

/// Agent whose state after an observation is (counter, current input); the
/// counter starts at `start` for the first input and moves by `next`.
template <class Next, class Label>
FsmAgent counter_agent(const CslSchedule& s, std::size_t counters, std::size_t start, Next next,
                       Label label, std::string name) {
  Interface iface = csl_interface(s);
  const std::size_t X = s.inputs.size(), Y = s.labels.size(), slots = Y + 1;
  const std::size_t O = iface.num_observations();
  const std::size_t states = 1 + counters * X;
  std::vector<ActionDistribution> outputs{ActionDistribution::point_mass(Y, 0)};
  for (std::size_t c = 0; c < counters; ++c) {
    for (std::size_t x = 0; x < X; ++x) outputs.push_back(ActionDistribution::point_mass(Y, label(c, x)));
  }
  std::vector<std::size_t> transitions;
  for (std::size_t q = 0; q < states; ++q) {
    std::size_t c = q == 0 ? start : next((q - 1) / X);
    for (std::size_t a = 0; a < Y; ++a) {
      for (std::size_t o = 0; o < O; ++o) transitions.push_back(1 + c * X + o / slots);
    }
  }
  return FsmAgent(std::move(iface), std::move(outputs), std::move(transitions), 0, std::move(name));
}

std::vector<std::vector<std::size_t>> bayes_table(const CslSchedule& s) {
  const std::size_t X = s.inputs.size(), Y = s.labels.size();
  std::vector<std::vector<std::size_t>> table;
  for (std::size_t pos = 0; pos < csl_positions(s); ++pos) {
    const auto& dist = s.phases[csl_phase_at(s, pos)].distribution;
    std::vector<std::size_t> row;
    for (std::size_t x = 0; x < X; ++x) {
      std::size_t best = 0;
      for (std::size_t y = 1; y < Y; ++y) {
        if (dist[x * Y + y] > dist[x * Y + best]) best = y;
      }
      row.push_back(best);
    }
    table.push_back(std::move(row));
  }
  return table;
}

std::string label_tuple(const CslSchedule& s, const std::vector<std::size_t>& labels) {
  std::string out;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    out += (x ? "," : "") + s.inputs[x] + ":" + s.labels[labels[x]];
  }
  return out;
}

}  // namespace

FsmAgent csl_classifier(const CslSchedule& s, const std::vector<std::size_t>& labels,
                        std::string name) {
  validate(s);
  if (labels.size() != s.inputs.size()) throw SpecError("classifier needs one label per input");
  for (auto y : labels) {
    if (y >= s.labels.size()) throw InterfaceMismatch("classifier label outside the label set");
  }
  if (name.empty()) name = "classifier[" + label_tuple(s, labels) + "]";
  return counter_agent(
      s, 1, 0, [](std::size_t) { return 0; }, [&](std::size_t, std::size_t x) { return labels[x]; },
      std::move(name));
}

std::vector<FsmAgent> csl_classifiers(const CslSchedule& s) {
  validate(s);
  const std::size_t X = s.inputs.size(), Y = s.labels.size();
  std::vector<FsmAgent> out;
  std::vector<std::size_t> labels(X, 0);
  while (true) {
    out.push_back(csl_classifier(s, labels));
    std::size_t i = X;
    while (i > 0 && ++labels[i - 1] == Y) labels[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

FsmAgent csl_clock_agent(const CslSchedule& s, std::size_t shift, std::string name) {
  validate(s);
  auto table = bayes_table(s);
  const std::size_t n = table.size();
  if (shift != 0 && !s.cyclic) throw PreconditionError("only cyclic schedules can be shifted");
  if (name.empty()) name = shift == 0 ? "clock" : "clock_shift_" + std::to_string(shift);
  return counter_agent(
      s, n, 0, [&](std::size_t c) { return csl_advance(s, c); },
      [&](std::size_t c, std::size_t x) { return table[(c + shift) % n][x]; }, std::move(name));
}

FsmAgent csl_converging_agent(const CslSchedule& s, std::size_t steps, std::string name) {
  validate(s);
  auto table = bayes_table(s);
  const std::size_t n = table.size();
  if (name.empty()) name = "converging_" + std::to_string(steps);
  // Counter k * n + pos with k the number of inputs seen so far, saturating at `steps`.
  return counter_agent(
      s, n * (steps + 1), 0,
      [&](std::size_t c) { return std::min(c / n + 1, steps) * n + csl_advance(s, c % n); },
      [&](std::size_t c, std::size_t x) {
        return c / n < steps ? table[c % n][x] : table[0][x];
      },
      std::move(name));
}

FsmAgent csl_copy_last_label(const CslSchedule& s, std::string name) {
  validate(s);
  Interface iface = csl_interface(s);
  const std::size_t Y = s.labels.size(), slots = Y + 1, O = iface.num_observations();
  std::vector<ActionDistribution> outputs{ActionDistribution::point_mass(Y, 0)};
  for (std::size_t o = 0; o < O; ++o) {
    std::size_t label = o % slots;
    outputs.push_back(ActionDistribution::point_mass(Y, label == Y ? 0 : label));
  }
  std::vector<std::size_t> transitions;
  for (std::size_t q = 0; q <= O; ++q) {
    for (std::size_t a = 0; a < Y; ++a) {
      for (std::size_t o = 0; o < O; ++o) transitions.push_back(1 + o);
    }
  }
  return FsmAgent(std::move(iface), std::move(outputs), std::move(transitions), 0,
                  std::move(name));
}

CslSchedule csl_flip_schedule(std::size_t period) {
  if (period == 0) throw PreconditionError("flip period must be positive");
  CslSchedule s;
  s.inputs = {"x0", "x1"};
  s.labels = {"y0", "y1"};
  Rational half = make_rational(1, 2);
  s.phases.push_back({{half, 0, 0, half}, period});
  s.phases.push_back({{0, half, half, 0}, period});
  s.cyclic = true;
  return s;
}

CslSchedule csl_majority_schedule() {
  CslSchedule s;
  s.inputs = {"x0", "x1"};
  s.labels = {"y0", "y1"};
  Rational big = make_rational(3, 8), small = make_rational(1, 8);
  s.phases.push_back({{big, small, big, small}, std::nullopt});
  return s;
}

CrlInstance csl_instance(const CslSchedule& s, std::size_t period, std::size_t horizon) {
  FsmEnvironment env = build_csl_env(s);
  std::vector<FsmAgent> basis = csl_classifiers(s);
  std::vector<FsmAgent> agents = basis;
  agents.push_back(csl_clock_agent(s));
  if (s.cyclic) agents.push_back(csl_clock_agent(s, period));
  agents.push_back(csl_converging_agent(s, period));
  agents.push_back(csl_converging_agent(s, 2 * period));
  agents.push_back(csl_copy_last_label(s, "copy_last_label"));
  return CrlInstance{std::move(env), PerformanceSpec::finite_horizon_average(horizon),
                     std::move(agents), std::move(basis), std::nullopt};
}

}  // namespace crl
