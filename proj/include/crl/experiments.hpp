#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "crl/agent.hpp"
#include "crl/environment.hpp"
#include "crl/environments.hpp"

namespace crl {

/// Every stream is std::mt19937_64 seeded with
/// std::seed_seq{master_seed_lo, master_seed_hi, run, stream}.
inline constexpr const char* kRngDescription =
    "mt19937_64 seeded by seed_seq{master_lo, master_hi, run, stream}; stream 0 = environment, "
    "1 = learner";

enum class Annealing { none, harmonic };

struct QLearnerConfig {
  std::string id = "q";
  double epsilon = 0.15;
  double alpha0 = 0.1;
  Annealing annealing = Annealing::none;
  /// Harmonic schedule: alpha = alpha0 * kappa / (kappa + prior visits of (s, a)).
  double kappa = 100.0;
  double gamma = 0.95;
  double initial_q = 0.0;

  /// Throws PreconditionError on out-of-range parameters.
  void validate() const;
  std::string describe() const;
};

struct ExperimentOptions {
  std::size_t steps = 200000;
  std::size_t runs = 100;
  std::size_t bin_width = 1000;
  /// Episodes are cut after this many steps and restart from the start state
  /// (the active MDP is kept).
  std::size_t episode_cap = 100;
  std::uint64_t master_seed = 0;
  /// 0 = one per hardware thread. Results do not depend on it.
  std::size_t threads = 0;
  /// Throw if a Q-value leaves [-B, B] with B = r_max / (1 - gamma) + |initial_q|.
  bool check_q_bounds = false;
};

/// What one run produced: per bin, the mean return of episodes that ended in
/// it (NaN when none did); plus the steps at which the active MDP changed.
struct RunTrace {
  std::vector<double> bin_means;
  std::vector<std::size_t> switch_steps;
  std::size_t episodes = 0;
};

struct RunStats {
  QLearnerConfig config;
  ExperimentOptions options;
  std::string rng = kRngDescription;
  std::vector<std::size_t> bin_start;
  std::vector<double> mean;
  std::vector<double> ci_half;
  /// Runs contributing to each bin.
  std::vector<std::size_t> counts;
  /// [run][bin], kept for paired comparisons.
  std::vector<std::vector<double>> per_run;
};

/// Tabular epsilon-greedy Q-learning over observations (the MDP state), one
/// run. Each environment step draws exactly two uniforms from the environment
/// stream (switch, then transition), so runs with the same index see the same
/// switch times under every learner configuration.
RunTrace simulate_run(const SwitchingSpec& spec, const QLearnerConfig& config,
                      const ExperimentOptions& options, std::size_t run);

RunStats run_q_learning(const SwitchingSpec& spec, const QLearnerConfig& config,
                        const ExperimentOptions& options);

struct Difference {
  std::string minuend;
  std::string subtrahend;
  std::vector<std::size_t> bin_start;
  std::vector<double> mean;
  std::vector<double> ci_half;
  std::vector<std::size_t> counts;
};

struct Comparison {
  std::vector<RunStats> stats;
  /// Paired per-bin differences of every config against the first.
  std::vector<Difference> differences;
};

/// Runs every config on the same environment streams. Needs at least two configs.
Comparison compare_variants(const SwitchingSpec& spec, const std::vector<QLearnerConfig>& configs,
                            const ExperimentOptions& options);

/// "bin_start,mean,ci_half,config_id" rows for every config.
std::string to_csv(const std::vector<RunStats>& stats);
std::string to_csv(const std::vector<Difference>& differences);

struct MonteCarloEstimate {
  double mean = 0;
  double standard_error = 0;
  std::size_t samples = 0;
};

/// Sampled (1/T) * sum of the first T rewards of a fixed finite-state agent.
MonteCarloEstimate simulate_average_reward(const FsmAgent& agent, const FsmEnvironment& env,
                                           std::size_t horizon, std::size_t samples,
                                           std::uint64_t seed);

/// Generator for (master seed, run, stream).
std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t run, std::uint64_t stream);

}  // namespace crl
