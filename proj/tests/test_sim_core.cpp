#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pegasus/gridworld.hpp"
#include "pegasus/sim_model.hpp"
#include "pegasus/tabular.hpp"

using namespace pegasus;
using grid::Cell;

namespace {

// Two-state toy model: state 0 steps to the absorbing state 1 regardless of
// the action or noise.
SimModel<int, int> quick_absorb_model() {
  SimModel<int, int> m;
  m.noise_dim = 1;
  m.gamma = 0.9;
  m.r_max = 1.0;
  m.transition = [](const int&, const int&, std::span<const double>) { return 1; };
  m.reward = [](const int& s) { return s == 1 ? 0.0 : -1.0; };
  m.initial = [](Rng&) { return 0; };
  m.absorbing = [](const int& s) { return s == 1; };
  return m;
}

double ks_statistic(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, std::max(xs[i] - i / n, (i + 1) / n - xs[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("draw_scenarios is bit-reproducible and well shaped") {
  auto model = grid::build_gridworld();
  model.noise_dim = 1;
  const auto a = draw_scenarios(model, 3, 2, 1234);
  const auto b = draw_scenarios(model, 3, 2, 1234);
  REQUIRE(a.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(a[i].rows == 2);
    CHECK(a[i].cols == 1);
    REQUIRE(a[i].noise.size() == 2);
    CHECK(a[i].noise == b[i].noise);
    CHECK(a[i].initial_state == b[i].initial_state);
    for (double v : a[i].noise) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("scenario i depends only on (seed, i)") {
  const auto model = grid::build_gridworld();
  const auto wide = draw_scenarios(model, 10, 4, 777);
  const auto narrow = draw_scenarios(model, 3, 4, 777);
  for (int i = 0; i < 3; ++i) CHECK(wide[i].noise == narrow[i].noise);
}

TEST_CASE("pooled noise entries pass a KS test against Uniform[0,1]") {
  const auto model = grid::build_gridworld();
  const auto scenarios = draw_scenarios(model, 100, 100, 2024);
  std::vector<double> pooled;
  pooled.reserve(10000);
  for (const auto& sc : scenarios)
    for (double v : sc.noise) pooled.push_back(v);
  REQUIRE(pooled.size() == 10000);
  CHECK(ks_statistic(std::move(pooled)) < 1.6276 / std::sqrt(10000.0));
}

TEST_CASE("gridworld rollout follows the printed noise branches") {
  const auto model = grid::build_gridworld();
  auto right_policy = [](const Cell&) { return grid::kRight; };

  Scenario<Cell> sc;
  sc.initial_state = grid::kStart;
  sc.rows = 3;
  sc.cols = 1;

  SUBCASE("no noise branch taken: the intended action applies") {
    sc.noise = {0.5, 0.9, 0.21};
    const auto traj = rollout(model, right_policy, sc, 1, DiscountMode::Discrete);
    CHECK(traj.states[1] == Cell{1, 0});
  }
  SUBCASE("p <= 0.05 forces the up branch regardless of the action") {
    sc.noise = {0.01, 0.5, 0.5};
    const auto traj = rollout(model, right_policy, sc, 1, DiscountMode::Discrete);
    CHECK(traj.states[1] == Cell{0, 1});
  }
  SUBCASE("attempted left from the start corner is wall-blocked") {
    sc.noise = {0.07, 0.5, 0.5};  // 0.05 < p <= 0.10: forced left
    const auto traj = rollout(model, right_policy, sc, 1, DiscountMode::Discrete);
    CHECK(traj.states[1] == grid::kStart);
  }
}

TEST_CASE("an absorbing initial state yields a frozen zero-reward trajectory") {
  auto model = quick_absorb_model();
  model.initial = [](Rng&) { return 1; };
  const auto scenarios = draw_scenarios(model, 1, 5, 3);
  auto policy = [](const int&) { return 0; };
  const auto traj = rollout(model, policy, scenarios[0], 5, DiscountMode::Discrete);
  for (double r : traj.rewards) CHECK(r == 0.0);
  for (const int& s : traj.states) CHECK(s == 1);
}

TEST_CASE("estimate_value basics") {
  auto model = quick_absorb_model();
  auto policy = [](const int&) { return 0; };

  SUBCASE("identically zero reward gives value zero") {
    model.reward = [](const int&) { return 0.0; };
    const auto scenarios = draw_scenarios(model, 8, 4, 5);
    CHECK(estimate_value(model, policy, scenarios, 4).value == 0.0);
  }
  SUBCASE("single scenario at h = 0 returns the initial reward") {
    const auto scenarios = draw_scenarios(model, 1, 1, 5);
    const auto est = estimate_value(model, policy, scenarios, 0);
    CHECK(est.value == -1.0);
  }
  SUBCASE("empty scenario list is rejected") {
    std::vector<Scenario<int>> none;
    CHECK_THROWS(estimate_value(model, policy, none, 1));
  }
}

TEST_CASE("per-scenario returns freeze once every rollout is absorbed") {
  const auto model = quick_absorb_model();
  auto policy = [](const int&) { return 0; };
  const auto scenarios = draw_scenarios(model, 6, 10, 77);
  const auto short_est = estimate_value(model, policy, scenarios, 3);
  const auto long_est = estimate_value(model, policy, scenarios, 10);
  CHECK(short_est.per_scenario == long_est.per_scenario);
  CHECK(short_est.value == long_est.value);
}

TEST_CASE("trajectories replay exactly through the transition function") {
  const auto model = grid::build_gridworld();
  Rng rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pol = grid::policy_from_index(static_cast<std::uint32_t>(rng.next_u64() % 65536));
    grid::GridPolicyFn fn{&pol};
    const auto scenarios = draw_scenarios(model, 1, 30, rng.next_u64());
    const auto traj = rollout(model, fn, scenarios[0], 30, DiscountMode::Discrete);
    REQUIRE(traj.states.size() == 31);
    for (int t = 0; t < 30; ++t) {
      const Cell& s = traj.states[t];
      const Cell expect = model.absorbing(s)
                              ? s
                              : model.transition(s, fn(s), scenarios[0].noise_row(t));
      CHECK(traj.states[t + 1] == expect);
      CHECK(traj.rewards[t] == model.reward(s));
    }
  }
}

TEST_CASE("shape and mode preconditions are enforced") {
  const auto model = grid::build_gridworld();
  CHECK_THROWS(draw_scenarios(model, 0, 5, 1));
  CHECK_THROWS(draw_scenarios(model, 5, 0, 1));

  auto right = [](const Cell&) { return grid::kRight; };
  Scenario<Cell> sc;
  sc.initial_state = grid::kStart;
  sc.rows = 2;
  sc.cols = 1;
  sc.noise = {0.5, 0.5};
  CHECK_THROWS(rollout(model, right, sc, 5, DiscountMode::Discrete));  // too few rows
  Scenario<Cell> wide = sc;
  wide.cols = 2;
  wide.noise = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS(rollout(model, right, wide, 2, DiscountMode::Discrete));  // width mismatch
  // ContinuousGoal needs a goal_fraction hook; the gridworld has none.
  CHECK_THROWS(rollout(model, right, sc, 2, DiscountMode::ContinuousGoal));
}

TEST_CASE("common random numbers: evaluating twice is bit-identical") {
  const auto model = grid::build_gridworld();
  const auto scenarios = draw_scenarios(model, 32, 50, 99);
  const auto pol = grid::policy_from_index(12345);
  grid::GridPolicyFn fn{&pol};
  const auto a = estimate_value(model, fn, scenarios, 50);
  const auto b = estimate_value(model, fn, scenarios, 50);
  CHECK(a.value == b.value);
  CHECK(a.per_scenario == b.per_scenario);
}

TEST_CASE("estimator mean matches the linear-solve oracle on the gridworld") {
  const auto model = grid::build_gridworld();
  // A sensible policy: head right unless blocked, then up.
  pegasus::TabularPolicy pol;
  pol.table.assign(8, grid::kRight);
  const auto& cat = grid::observation_catalogue();
  for (int k = 0; k < 8; ++k) {
    const bool east_wall = cat[k].bits & (1u << 2);
    if (east_wall) pol.table[k] = grid::kUp;
  }
  pol.class_index = grid::index_of_policy(pol);

  const auto mdp = grid::tabular_gridworld();
  const auto actions = grid::state_action_table(pol);
  const double exact = exact_value_tabular(mdp, actions, 0.99);

  const auto scenarios = draw_scenarios(model, 4096, 100, 31337);
  grid::GridPolicyFn fn{&pol};
  const auto est = estimate_value(model, fn, scenarios, 100);
  CHECK(std::fabs(est.value - exact) < 0.5);
}

TEST_CASE("scenario trajectories match the tabular MDP distribution (first 3 steps)") {
  const auto model = grid::build_gridworld();
  const auto pol = grid::policy_from_index(40000);
  const auto mdp = grid::tabular_gridworld();
  const auto actions = grid::state_action_table(pol);

  const int m = 20000;
  const auto scenarios = draw_scenarios(model, m, 3, 4242);
  grid::GridPolicyFn fn{&pol};

  // Exact state marginals by forward recursion.
  std::vector<double> dist(25, 0.0);
  dist[grid::cell_id(grid::kStart)] = 1.0;
  std::vector<std::vector<int>> counts(4, std::vector<int>(25, 0));
  for (const auto& sc : scenarios) {
    const auto traj = rollout(model, fn, sc, 3, DiscountMode::Discrete);
    for (int t = 1; t <= 3; ++t) ++counts[t][grid::cell_id(traj.states[t])];
  }
  for (int t = 1; t <= 3; ++t) {
    std::vector<double> next(25, 0.0);
    for (int s = 0; s < 25; ++s) {
      if (dist[s] == 0.0) continue;
      const auto& row = mdp.prob[s][actions[s]];
      for (int s2 = 0; s2 < 25; ++s2) next[s2] += dist[s] * row[s2];
    }
    dist = next;
    for (int s = 0; s < 25; ++s) {
      const double q = dist[s];
      const double sd = std::sqrt(std::max(q * (1.0 - q) * m, 1e-12));
      CHECK(std::fabs(counts[t][s] - q * m) <= 3.0 * sd + 1e-9);
    }
  }
}
