#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pegasus/gridworld.hpp"

namespace pegasus::grid {

/// Model variant for the experiment: the plain simulative model or the
/// hash-wrapped one.
enum class Variant { Normal, Complex };

std::string variant_name(Variant v);

/// Scenario-value estimates for every policy in the 4^8 class at once.
/// Produces exactly the vector of estimate_value results that evaluating each
/// policy on `noise` would give, with rollouts grouped by shared behavior.
/// `noise` holds m scenarios of h entries each (d_P = 1, row-major).
std::vector<double> sweep_all_policies(const std::vector<double>& noise, int m, int h,
                                       double gamma, Variant variant,
                                       std::uint64_t complex_seed);

/// Exact V(policy) from the start state for every policy index, by linear
/// solve on the explicit tabular MDP.
std::vector<double> exact_policy_values(double gamma, int threads);

struct GridExperimentCell {
  Variant variant = Variant::Normal;
  int m = 0;
  std::vector<std::uint32_t> winner_index;  // per trial
  std::vector<double> winner_value;         // exact V of the winner, per trial
  double mean_value = 0.0;
  double stderr_mean = 0.0;
};

struct GridExperimentResult {
  std::vector<GridExperimentCell> cells;  // normal variants first, then complex
  double opt_value = 0.0;
  std::uint32_t opt_index = 0;
  double worst_value = 0.0;
};

/// The scenario-count study: for each variant and each m, `trials` repetitions
/// of draw-scenarios / exhaustive-search / exact-scoring. Scenario draws for a
/// given (m, trial) are shared between the two variants so the comparison is
/// paired. Fully determined by `seed`; `threads` only changes the schedule.
GridExperimentResult gridworld_experiment(const std::vector<int>& m_values, int trials, int h,
                                          double gamma, std::uint64_t seed, int threads);

/// Seed of the scenario set used by (m, trial); exposed so tests can replay
/// individual trials.
std::uint64_t trial_scenario_seed(std::uint64_t seed, int m, int trial);

}  // namespace pegasus::grid
