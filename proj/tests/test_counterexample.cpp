#include <algorithm>
#include <vector>

#include "doctest.h"
#include "pegasus/counterexample.hpp"

using namespace pegasus;
using namespace pegasus::theory;

TEST_CASE("the adversarial model defeats the estimator exactly") {
  for (int m : {1, 10, 500}) {
    const auto report = counterexample_demo(m, 2, 1234 + m);
    CHECK(report.v_hat == 1.0);
    CHECK(report.v_true == 0.0);
    CHECK(report.gap == 1.0);
    CHECK(report.union_measure == Rational(1, 2));
    CHECK(report.policy_index >= 1);
  }
}

TEST_CASE("the reported policy index identifies the evading union") {
  const auto report = counterexample_demo(25, 2, 77);
  const IntervalUnion action_set = union_for_action(report.policy_index);
  CHECK(action_set.measure() == Rational(1, 2));
  // Re-drawing the same scenarios confirms the identified action evades them.
  const CxModel model = build_counterexample_model();
  const auto scenarios = draw_scenarios(model, 25, 2, 77);
  for (const auto& sc : scenarios) CHECK(!action_set.contains_double(sc.noise_row(0)[0]));
}

TEST_CASE("v_hat is produced by the generic estimator, not hard-coded") {
  // A policy whose union contains every first-step noise value gives -1, the
  // mirror image of the evading case.
  const CxModel model = build_counterexample_model();
  const auto scenarios = draw_scenarios(model, 50, 2, 9);
  const IntervalUnion everything({{Rational(0), Rational(1)}});  // measure 1, all points inside
  const CxAction action{&everything};
  auto policy = [&](const CxState&) { return action; };
  const auto est = estimate_value(model, policy, scenarios, 2);
  CHECK(est.value == -1.0);
}

TEST_CASE("pseudo-dimension shattering checker on threshold functions") {
  // The class {p -> 1[p <= t]} shatters any single point and no pair:
  // realizing the pattern (0 on the smaller, 1 on the larger) is impossible.
  auto shatters = [](const std::vector<double>& points) {
    // Candidate thresholds: the points themselves plus far ends; a finite scan
    // suffices for indicator classes over a finite point set.
    std::vector<double> thresholds = points;
    thresholds.push_back(-1.0);
    thresholds.push_back(2.0);
    for (double p : points) thresholds.push_back(p - 1e-9);
    const std::size_t want = 1ull << points.size();
    std::vector<bool> seen(want, false);
    std::size_t distinct = 0;
    for (double t : thresholds) {
      std::size_t pattern = 0;
      for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] <= t) pattern |= 1ull << i;
      if (!seen[pattern]) {
        seen[pattern] = true;
        ++distinct;
      }
    }
    return distinct == want;
  };
  CHECK(shatters({0.4}));
  CHECK(shatters({0.9}));
  CHECK(!shatters({0.3, 0.6}));
  CHECK(!shatters({0.5, 0.50001}));
}

TEST_CASE("the benign model's deviation shrinks with m") {
  std::vector<double> dev25, dev400;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    dev25.push_back(simple_model_max_deviation(25, 100, 1000 + seed));
    dev400.push_back(simple_model_max_deviation(400, 100, 2000 + seed));
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median(dev400) < 0.5 * median(dev25));
}
