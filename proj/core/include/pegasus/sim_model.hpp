#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pegasus/rng.hpp"

namespace pegasus {

enum class StateKind { Discrete, Continuous };

/// A (PO)MDP presented as a deterministic simulative model: the transition is
/// a pure function of (state, action, noise vector), where the noise vector is
/// uniform on [0,1]^noise_dim. Pushing uniform noise through `transition`
/// must reproduce the intended next-state distribution.
template <class State, class Action>
struct SimModel {
  StateKind state_kind = StateKind::Discrete;
  int state_dim = 0;   // d_S, continuous case only
  int noise_dim = 1;   // d_P, noise numbers consumed per step
  double gamma = 0.99; // in [0,1); gamma = 1 is tolerated only for fixed-length episodic uses
  double r_max = 1.0;

  std::function<State(const State&, const Action&, std::span<const double>)> transition;
  std::function<double(const State&)> reward;
  std::function<State(Rng&)> initial;
  std::function<bool(const State&)> absorbing;

  /// Optional: returns the fraction tau in [0,1] of the step at which the
  /// goal region was entered, or nullopt if this step did not enter it.
  /// Required for DiscountMode::ContinuousGoal.
  std::function<std::optional<double>(const State&, const State&)> goal_fraction;

  /// Optional text round-trip for one state, used by the flat scenario format.
  std::function<std::string(const State&)> state_to_text;
  std::function<State(const std::string&)> state_from_text;
};

/// One realized initial state plus a pre-drawn H x d_P block of uniform
/// numbers: the unit of common-random-number evaluation. Fixing a scenario
/// makes the return of every policy a deterministic number.
template <class State>
struct Scenario {
  State initial_state;
  std::vector<double> noise;  // row-major, rows x cols entries
  int rows = 0;
  int cols = 0;

  std::span<const double> noise_row(int t) const {
    return std::span<const double>(noise.data() + static_cast<std::size_t>(t) * cols, cols);
  }
};

enum class DiscountMode { Discrete, ContinuousGoal };

/// State/reward sequence deterministically produced by (policy, scenario).
template <class State>
struct Trajectory {
  std::vector<State> states;    // length h+1
  std::vector<double> rewards;  // length h+1, rewards[t] = R(states[t])
  std::optional<std::pair<int, double>> goal_step;  // (step index, tau)
};

/// Draws m scenarios of h noise rows each. Scenario i depends only on
/// (seed, i): the initial state consumes its substream first, then the noise
/// block is filled in row-major order.
template <class State, class Action>
std::vector<Scenario<State>> draw_scenarios(const SimModel<State, Action>& model, int m, int h,
                                            std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("draw_scenarios: m must be >= 1");
  if (h < 1) throw std::invalid_argument("draw_scenarios: h must be >= 1");
  std::vector<Scenario<State>> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
    Scenario<State> sc;
    sc.initial_state = model.initial(rng);
    sc.rows = h;
    sc.cols = model.noise_dim;
    sc.noise.resize(static_cast<std::size_t>(h) * model.noise_dim);
    for (double& v : sc.noise) v = rng.next_uniform();
    out.push_back(std::move(sc));
  }
  return out;
}

/// Deterministic rollout of `policy` on `scenario` for h steps. Once an
/// absorbing state is reached the state self-loops and later rewards are 0.
template <class State, class Action, class Policy>
Trajectory<State> rollout(const SimModel<State, Action>& model, const Policy& policy,
                          const Scenario<State>& scenario, int h, DiscountMode mode) {
  if (scenario.rows < h) throw std::invalid_argument("rollout: scenario has fewer noise rows than h");
  if (scenario.cols != model.noise_dim)
    throw std::invalid_argument("rollout: scenario noise width does not match model noise_dim");
  if (mode == DiscountMode::ContinuousGoal && !model.goal_fraction)
    throw std::invalid_argument("rollout: ContinuousGoal mode requires a goal_fraction hook");

  Trajectory<State> traj;
  traj.states.reserve(h + 1);
  traj.rewards.reserve(h + 1);
  State cur = scenario.initial_state;
  traj.states.push_back(cur);
  traj.rewards.push_back(model.reward(cur));
  for (int t = 0; t < h; ++t) {
    if (model.absorbing(cur)) {
      // Absorbing states self-loop; models guarantee reward 0 there.
      traj.states.push_back(cur);
      traj.rewards.push_back(0.0);
      continue;
    }
    State next = model.transition(cur, policy(cur), scenario.noise_row(t));
    if (mode == DiscountMode::ContinuousGoal && !traj.goal_step) {
      if (auto tau = model.goal_fraction(cur, next)) {
        traj.goal_step = std::make_pair(t + 1, *tau);
      }
    }
    traj.states.push_back(next);
    traj.rewards.push_back(model.reward(next));
    cur = std::move(next);
  }
  return traj;
}

template <class State>
double discounted_return(const Trajectory<State>& traj, double gamma, DiscountMode mode) {
  double sum = 0.0;
  double g = 1.0;
  for (std::size_t t = 0; t < traj.rewards.size(); ++t) {
    double r = traj.rewards[t];
    if (mode == DiscountMode::ContinuousGoal && traj.goal_step &&
        static_cast<std::size_t>(traj.goal_step->first) == t) {
      // On the step entering the goal the reward is gamma^tau in place of the
      // model's goal reward; the gamma^t factor still applies.
      r = std::pow(gamma, traj.goal_step->second);
    }
    sum += g * r;
    g *= gamma;
  }
  return sum;
}

struct ValueEstimate {
  double value = 0.0;
  std::vector<double> per_scenario;
};

/// The scenario value estimator: per-scenario truncated discounted returns and
/// their arithmetic mean, summed in scenario-index order so the result is
/// identical under any parallel execution schedule.
template <class State, class Action, class Policy>
ValueEstimate estimate_value(const SimModel<State, Action>& model, const Policy& policy,
                             const std::vector<Scenario<State>>& scenarios, int h,
                             DiscountMode mode = DiscountMode::Discrete) {
  if (scenarios.empty()) throw std::invalid_argument("estimate_value: empty scenario list");
  ValueEstimate est;
  est.per_scenario.reserve(scenarios.size());
  for (const auto& sc : scenarios) {
    auto traj = rollout(model, policy, sc, h, mode);
    est.per_scenario.push_back(discounted_return(traj, model.gamma, mode));
  }
  double sum = 0.0;
  for (double v : est.per_scenario) sum += v;
  est.value = sum / static_cast<double>(est.per_scenario.size());
  return est;
}

}  // namespace pegasus
