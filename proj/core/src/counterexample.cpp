#include "pegasus/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pegasus::theory {

namespace {

CxModel base_model() {
  CxModel model;
  model.state_kind = StateKind::Discrete;
  model.noise_dim = 1;
  model.gamma = 1.0;  // undiscounted; rollouts are episodic and absorb by step 2
  model.r_max = 1.0;
  model.reward = [](const CxState& s) {
    switch (s) {
      case CxState::Plus: return 1.0;
      case CxState::Minus: return -1.0;
      default: return 0.0;
    }
  };
  model.initial = [](Rng&) { return CxState::Start; };
  model.absorbing = [](const CxState& s) { return s == CxState::Absorbed; };
  return model;
}

}  // namespace

CxModel build_counterexample_model() {
  CxModel model = base_model();
  model.transition = [](const CxState& s, const CxAction& a, std::span<const double> p) {
    if (s != CxState::Start) return CxState::Absorbed;
    if (a.membership == nullptr) throw std::invalid_argument("counterexample: action without union");
    return a.membership->contains_double(p[0]) ? CxState::Minus : CxState::Plus;
  };
  return model;
}

CxModel build_simple_counterexample_model() {
  CxModel model = base_model();
  model.transition = [](const CxState& s, const CxAction&, std::span<const double> p) {
    if (s != CxState::Start) return CxState::Absorbed;
    return p[0] <= 0.5 ? CxState::Minus : CxState::Plus;
  };
  return model;
}

CounterexampleReport counterexample_demo(int m, int h, std::uint64_t seed) {
  if (m < 1 || h < 1) throw std::invalid_argument("counterexample_demo: m and h must be >= 1");
  const CxModel model = build_counterexample_model();
  const auto scenarios = draw_scenarios(model, m, h, seed);

  std::vector<double> first_entries;
  first_entries.reserve(scenarios.size());
  for (const auto& sc : scenarios) first_entries.push_back(sc.noise_row(0)[0]);
  EvadingUnion evading = find_evading_union(first_entries);

  const CxAction action{&evading.set};
  auto policy = [&](const CxState&) { return action; };
  const auto est = estimate_value(model, policy, scenarios, h);

  CounterexampleReport report;
  report.m = m;
  report.policy_index = std::move(evading.index);
  report.union_measure = evading.set.measure();
  report.v_hat = est.value;
  // Analytic value of any constant policy: (+1)(1 - mu) + (-1) mu = 1 - 2 mu,
  // computed from the exact measure rather than hard-coded.
  const Rational v_true = 1 - 2 * report.union_measure;
  report.v_true = v_true.get_d();
  report.gap = std::fabs(report.v_hat - report.v_true);
  return report;
}

double simple_model_max_deviation(int m, int num_policies, std::uint64_t seed) {
  if (m < 1 || num_policies < 1)
    throw std::invalid_argument("simple_model_max_deviation: m and num_policies must be >= 1");
  const CxModel model = build_simple_counterexample_model();
  const auto scenarios = draw_scenarios(model, m, 2, seed);
  double worst = 0.0;
  for (int i = 1; i <= num_policies; ++i) {
    const IntervalUnion u = union_from_index(i);
    const CxAction action{&u};
    auto policy = [&](const CxState&) { return action; };
    const auto est = estimate_value(model, policy, scenarios, 2);
    worst = std::max(worst, std::fabs(est.value));
  }
  return worst;
}

}  // namespace pegasus::theory
