#include "crl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "crl/errors.hpp"

namespace crl {

std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t run, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32), static_cast<std::uint32_t>(run),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

void QLearnerConfig::validate() const {
  if (!(epsilon >= 0 && epsilon <= 1)) throw PreconditionError("epsilon must lie in [0, 1]");
  if (!(alpha0 > 0)) throw PreconditionError("alpha0 must be positive");
  if (!(gamma >= 0 && gamma < 1)) throw PreconditionError("gamma must lie in [0, 1)");
  if (annealing == Annealing::harmonic && !(kappa > 0)) {
    throw PreconditionError("kappa must be positive");
  }
}

std::string QLearnerConfig::describe() const {
  std::ostringstream out;
  out << id << ": epsilon=" << epsilon << " alpha0=" << alpha0 << " annealing="
      << (annealing == Annealing::none ? "none" : "harmonic(kappa=" + std::to_string(kappa) + ")")
      << " gamma=" << gamma << " initial_q=" << initial_q;
  return out.str();
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return std::generate_canonical<double, 53>(rng);
}

/// Float copy of a switching spec for fast sampling.
struct Simulator {
  struct Row {
    std::vector<double> cumulative;
    std::vector<std::size_t> next;
    std::vector<double> reward;
  };
  std::size_t n = 0, S = 0, A = 0;
  double p = 0;
  std::vector<std::size_t> start;
  std::vector<std::vector<bool>> terminal;
  std::vector<Row> rows;  // [(i * S + s) * A + a]
  double max_abs_reward = 0;

  explicit Simulator(const SwitchingSpec& spec) {
    validate(spec);
    n = spec.mdps.size();
    S = spec.mdps[0].num_states();
    A = spec.mdps[0].num_actions();
    p = spec.p_switch.get_d();
    for (const auto& mdp : spec.mdps) {
      start.push_back(mdp.start);
      std::vector<bool> t(S, false);
      for (std::size_t s = 0; s < S; ++s) t[s] = mdp.is_terminal(s);
      terminal.push_back(std::move(t));
      for (const auto& tr : mdp.transitions) {
        Row row;
        double acc = 0;
        for (const auto& out : tr) {
          if (out.probability == 0) continue;
          acc += out.probability.get_d();
          row.cumulative.push_back(acc);
          row.next.push_back(out.next);
          row.reward.push_back(out.reward.get_d());
          max_abs_reward = std::max(max_abs_reward, std::abs(out.reward.get_d()));
        }
        row.cumulative.back() = 1.0;
        rows.push_back(std::move(row));
      }
    }
  }

  /// Consumes exactly two uniforms.
  void step(std::size_t& index, std::size_t s, std::size_t a, std::mt19937_64& rng,
            std::size_t& next, double& reward) const {
    double u_switch = uniform01(rng);
    double u_move = uniform01(rng);
    if (n > 1 && u_switch < p) {
      auto k = std::min<std::size_t>(static_cast<std::size_t>(u_switch / p * double(n - 1)), n - 2);
      index = k < index ? k : k + 1;
    }
    const Row& row = rows[(index * S + s) * A + a];
    std::size_t j = static_cast<std::size_t>(
        std::upper_bound(row.cumulative.begin(), row.cumulative.end(), u_move) -
        row.cumulative.begin());
    j = std::min(j, row.next.size() - 1);
    next = row.next[j];
    reward = row.reward[j];
  }
};

std::size_t num_bins(const ExperimentOptions& o) { return (o.steps + o.bin_width - 1) / o.bin_width; }

void check_options(const ExperimentOptions& o) {
  if (o.steps == 0 || o.runs == 0) throw PreconditionError("steps and runs must be at least 1");
  if (o.bin_width == 0 || o.episode_cap == 0) {
    throw PreconditionError("bin width and episode cap must be at least 1");
  }
}

/// Mean and 1.96 standard errors over the finite entries of column `bin`.
void summarize(const std::vector<std::vector<double>>& rows, std::size_t bin, double& mean,
               double& half, std::size_t& count) {
  double sum = 0;
  count = 0;
  for (const auto& row : rows) {
    if (std::isfinite(row[bin])) {
      sum += row[bin];
      ++count;
    }
  }
  mean = count ? sum / double(count) : std::numeric_limits<double>::quiet_NaN();
  half = 0;
  if (count >= 2) {
    double ss = 0;
    for (const auto& row : rows) {
      if (std::isfinite(row[bin])) ss += (row[bin] - mean) * (row[bin] - mean);
    }
    half = 1.96 * std::sqrt(ss / double(count - 1) / double(count));
  }
}

template <class Fn>
void for_each_run(std::size_t runs, std::size_t threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, runs);
  if (threads <= 1) {
    for (std::size_t r = 0; r < runs; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t r; (r = next++) < runs;) {
        try {
          fn(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

RunTrace simulate_run(const SwitchingSpec& spec, const QLearnerConfig& config,
                      const ExperimentOptions& options, std::size_t run) {
  config.validate();
  check_options(options);
  Simulator sim(spec);
  auto env_rng = make_stream(options.master_seed, run, 0);
  auto agent_rng = make_stream(options.master_seed, run, 1);
  const std::size_t S = sim.S, A = sim.A;
  std::vector<double> q(S * A, config.initial_q);
  std::vector<std::size_t> visits(S * A, 0);
  const double bound = sim.max_abs_reward / (1 - config.gamma) + std::abs(config.initial_q);

  RunTrace trace;
  const std::size_t bins = num_bins(options);
  std::vector<double> sums(bins, 0.0);
  std::vector<std::size_t> ends(bins, 0);
  std::size_t index = spec.initial_index;
  std::size_t s = sim.start[index];
  double episode_return = 0;
  std::size_t episode_length = 0;
  std::vector<std::size_t> best;

  for (std::size_t t = 0; t < options.steps; ++t) {
    std::size_t a;
    if (uniform01(agent_rng) < config.epsilon) {
      a = std::min<std::size_t>(static_cast<std::size_t>(uniform01(agent_rng) * double(A)), A - 1);
    } else {
      best.clear();
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < A; ++b) {
        double v = q[s * A + b];
        if (v > top) {
          top = v;
          best.assign(1, b);
        } else if (v == top) {
          best.push_back(b);
        }
      }
      a = best.size() == 1 ? best[0]
                           : best[std::min<std::size_t>(
                                 static_cast<std::size_t>(uniform01(agent_rng) * double(best.size())),
                                 best.size() - 1)];
    }

    std::size_t before = index, next;
    double reward;
    sim.step(index, s, a, env_rng, next, reward);
    if (index != before) trace.switch_steps.push_back(t);
    bool terminal = sim.terminal[index][next];

    double target = reward;
    if (!terminal) target += config.gamma * *std::max_element(&q[next * A], &q[next * A] + A);
    double alpha = config.alpha0;
    if (config.annealing == Annealing::harmonic) {
      alpha = config.alpha0 * config.kappa / (config.kappa + double(visits[s * A + a]));
    }
    ++visits[s * A + a];
    q[s * A + a] += alpha * (target - q[s * A + a]);
    if (options.check_q_bounds && std::abs(q[s * A + a]) > bound + 1e-9) {
      throw Error("Q-value " + std::to_string(q[s * A + a]) + " exceeds the bound " +
                  std::to_string(bound));
    }

    episode_return += reward;
    ++episode_length;
    if (terminal || episode_length == options.episode_cap) {
      sums[t / options.bin_width] += episode_return;
      ++ends[t / options.bin_width];
      ++trace.episodes;
      episode_return = 0;
      episode_length = 0;
      s = sim.start[index];
    } else {
      s = next;
    }
  }
  for (std::size_t b = 0; b < bins; ++b) {
    trace.bin_means.push_back(ends[b] ? sums[b] / double(ends[b])
                                      : std::numeric_limits<double>::quiet_NaN());
  }
  return trace;
}

RunStats run_q_learning(const SwitchingSpec& spec, const QLearnerConfig& config,
                        const ExperimentOptions& options) {
  config.validate();
  check_options(options);
  validate(spec);
  RunStats stats;
  stats.config = config;
  stats.options = options;
  stats.per_run.resize(options.runs);
  for_each_run(options.runs, options.threads, [&](std::size_t r) {
    stats.per_run[r] = simulate_run(spec, config, options, r).bin_means;
  });
  const std::size_t bins = num_bins(options);
  for (std::size_t b = 0; b < bins; ++b) {
    stats.bin_start.push_back(b * options.bin_width);
    double mean, half;
    std::size_t count;
    summarize(stats.per_run, b, mean, half, count);
    stats.mean.push_back(mean);
    stats.ci_half.push_back(half);
    stats.counts.push_back(count);
  }
  return stats;
}

Comparison compare_variants(const SwitchingSpec& spec, const std::vector<QLearnerConfig>& configs,
                            const ExperimentOptions& options) {
  if (configs.size() < 2) throw PreconditionError("comparison needs at least two configs");
  Comparison out;
  for (const auto& c : configs) out.stats.push_back(run_q_learning(spec, c, options));
  const auto& base = out.stats[0];
  for (std::size_t k = 1; k < out.stats.size(); ++k) {
    const auto& other = out.stats[k];
    Difference diff;
    diff.minuend = other.config.id;
    diff.subtrahend = base.config.id;
    diff.bin_start = base.bin_start;
    std::vector<std::vector<double>> paired(options.runs);
    for (std::size_t r = 0; r < options.runs; ++r) {
      for (std::size_t b = 0; b < base.mean.size(); ++b) {
        paired[r].push_back(other.per_run[r][b] - base.per_run[r][b]);
      }
    }
    for (std::size_t b = 0; b < base.mean.size(); ++b) {
      double mean, half;
      std::size_t count;
      summarize(paired, b, mean, half, count);
      diff.mean.push_back(mean);
      diff.ci_half.push_back(half);
      diff.counts.push_back(count);
    }
    out.differences.push_back(std::move(diff));
  }
  return out;
}

std::string to_csv(const std::vector<RunStats>& stats) {
  std::ostringstream out;
  out.precision(10);
  out << "bin_start,mean,ci_half,config_id\n";
  for (const auto& s : stats) {
    for (std::size_t b = 0; b < s.mean.size(); ++b) {
      out << s.bin_start[b] << ',' << s.mean[b] << ',' << s.ci_half[b] << ',' << s.config.id << '\n';
    }
  }
  return out.str();
}

std::string to_csv(const std::vector<Difference>& differences) {
  std::ostringstream out;
  out.precision(10);
  out << "bin_start,mean,ci_half,config_id\n";
  for (const auto& d : differences) {
    for (std::size_t b = 0; b < d.mean.size(); ++b) {
      out << d.bin_start[b] << ',' << d.mean[b] << ',' << d.ci_half[b] << ',' << d.minuend << '-' << d.subtrahend
          << '\n';
    }
  }
  return out.str();
}

MonteCarloEstimate simulate_average_reward(const FsmAgent& agent, const FsmEnvironment& env,
                                           std::size_t horizon, std::size_t samples,
                                           std::uint64_t seed) {
  if (horizon == 0 || samples < 2) throw PreconditionError("need T >= 1 and at least 2 samples");
  if (agent.interface() != env.interface()) {
    throw InterfaceMismatch("agent and environment use different interfaces");
  }
  auto rng = make_stream(seed, 0, 2);
  const std::size_t A = env.interface().num_actions();
  auto pick = [&](auto probability, std::size_t count) {
    double u = uniform01(rng), acc = 0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      acc += probability(i);
      if (u < acc) return i;
    }
    return count - 1;
  };
  double sum = 0, sum_sq = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    std::size_t q = agent.initial(), s = env.initial();
    double total = 0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const auto& dist = agent.output(q);
      std::size_t a = pick([&](std::size_t i) { return dist[i].get_d(); }, A);
      auto outs = env.outcomes(s, a);
      const auto& out = outs[pick([&](std::size_t i) { return outs[i].probability.get_d(); },
                                  outs.size())];
      total += out.reward.get_d();
      q = agent.step(q, a, out.observation);
      s = out.next;
    }
    double value = total / double(horizon);
    sum += value;
    sum_sq += value * value;
  }
  MonteCarloEstimate est;
  est.samples = samples;
  est.mean = sum / double(samples);
  double var = std::max(0.0, (sum_sq - double(samples) * est.mean * est.mean) / double(samples - 1));
  est.standard_error = std::sqrt(var / double(samples));
  return est;
}

}  // namespace crl
