#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pegasus/rng.hpp"

namespace pegasus {

/// Observation -> action table from a finite enumerable class. `table[k]` is
/// the action id for the k-th observation in the class catalogue order.
struct TabularPolicy {
  std::vector<int> table;
  std::uint32_t class_index = 0;
};

/// Real-parameter policy: theta plus a deterministic action rule supplied by
/// the environment that owns it.
struct ParamPolicy {
  std::vector<double> theta;
};

template <class PolicyT>
struct SearchReport {
  PolicyT best_policy;
  double best_estimate = 0.0;
  long evaluations = 0;
  std::vector<std::pair<long, double>> trace;  // (iteration, estimate actually computed)
  bool converged = false;
};

/// Argmax over an enumerable policy class against a fixed estimator closure.
/// The same scenarios back every evaluation (common random numbers); ties are
/// broken toward the lowest class index so the result is reproducible.
template <class PolicyT, class Estimator, class MakePolicy>
SearchReport<PolicyT> exhaustive_search(Estimator&& estimate, std::uint32_t class_size,
                                        MakePolicy&& policy_from_index) {
  if (class_size == 0) throw std::invalid_argument("exhaustive_search: empty policy class");
  SearchReport<PolicyT> report;
  report.trace.reserve(class_size);
  bool first = true;
  for (std::uint32_t idx = 0; idx < class_size; ++idx) {
    PolicyT pol = policy_from_index(idx);
    const double v = estimate(pol);
    ++report.evaluations;
    report.trace.emplace_back(static_cast<long>(idx), v);
    if (first || v > report.best_estimate) {
      report.best_estimate = v;
      report.best_policy = std::move(pol);
      first = false;
    }
  }
  return report;
}

/// Central-difference gradient (f(theta + h e_i) - f(theta - h e_i)) / 2h.
template <class F>
std::vector<double> numerical_gradient(F&& f, const std::vector<double>& theta, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("numerical_gradient: step must be > 0");
  std::vector<double> grad(theta.size());
  std::vector<double> probe = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + step;
    const double up = f(probe);
    probe[i] = theta[i] - step;
    const double down = f(probe);
    probe[i] = theta[i];
    if (!std::isfinite(up) || !std::isfinite(down))
      throw std::domain_error("numerical_gradient: non-finite objective at probe point");
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

/// Clamped numerical gradient ascent. Each update moves along the gradient
/// direction by min(step_size * |g|, clamp), and the reported policy is the
/// best iterate seen, not the last: the objective may be discontinuous.
template <class Estimator>
SearchReport<ParamPolicy> gradient_ascent(Estimator&& estimate, std::vector<double> theta0,
                                          double step_size, double clamp, int iters,
                                          double grad_step) {
  if (iters < 1) throw std::invalid_argument("gradient_ascent: iters must be >= 1");
  if (!(clamp > 0.0)) throw std::invalid_argument("gradient_ascent: clamp must be > 0");
  SearchReport<ParamPolicy> report;
  std::vector<double> theta = std::move(theta0);
  auto eval = [&](const std::vector<double>& t) {
    ++report.evaluations;
    return estimate(t);
  };
  double cur = eval(theta);
  report.best_policy.theta = theta;
  report.best_estimate = cur;
  report.trace.emplace_back(0, cur);
  for (int k = 1; k <= iters; ++k) {
    auto grad = numerical_gradient(eval, theta, grad_step);
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      report.converged = true;
      break;
    }
    const double len = std::min(step_size * norm, clamp);
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += len * grad[i] / norm;
    cur = eval(theta);
    report.trace.emplace_back(k, cur);
    if (cur > report.best_estimate) {
      report.best_estimate = cur;
      report.best_policy.theta = theta;
    }
  }
  return report;
}

/// Seeded accept-if-better hill climbing with Gaussian proposals.
template <class Estimator>
SearchReport<ParamPolicy> hill_climb(Estimator&& estimate, std::vector<double> theta0,
                                     double perturb_scale, int iters, std::uint64_t seed) {
  if (iters < 1) throw std::invalid_argument("hill_climb: iters must be >= 1");
  SearchReport<ParamPolicy> report;
  Rng rng(seed);
  std::vector<double> theta = std::move(theta0);
  double cur = estimate(theta);
  ++report.evaluations;
  report.best_policy.theta = theta;
  report.best_estimate = cur;
  report.trace.emplace_back(0, cur);
  std::vector<double> proposal(theta.size());
  for (int k = 1; k <= iters; ++k) {
    for (std::size_t i = 0; i < theta.size(); ++i)
      proposal[i] = theta[i] + perturb_scale * rng.next_normal();
    const double v = estimate(proposal);
    ++report.evaluations;
    report.trace.emplace_back(k, v);
    if (v > cur) {
      theta = proposal;
      cur = v;
      report.best_policy.theta = theta;
      report.best_estimate = cur;
    }
  }
  return report;
}

}  // namespace pegasus
