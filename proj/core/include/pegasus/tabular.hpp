#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pegasus/rng.hpp"

namespace pegasus {

/// Explicit finite MDP with known transition probabilities: the ground-truth
/// side of the estimator checks. States and actions are dense 0-based ids.
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  // prob[s][a][s'] — each row must sum to 1.
  std::vector<std::vector<std::vector<double>>> prob;
  std::vector<double> reward;          // R(s)
  std::vector<double> initial;         // distribution over start states
  std::vector<std::uint8_t> absorbing; // absorbing states self-loop with reward 0
};

namespace detail {

inline void check_stochastic(const TabularMdp& mdp) {
  for (int s = 0; s < mdp.num_states; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a) {
      double sum = 0.0;
      for (double p : mdp.prob[s][a]) {
        if (p < 0.0) throw std::invalid_argument("tabular: negative transition probability");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("tabular: transition row does not sum to 1");
    }
  }
}

// Dense Gaussian elimination with partial pivoting; systems here are tiny.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    if (a[col][col] == 0.0) throw std::runtime_error("solve_linear: singular system");
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace detail

/// Per-state values of a fixed tabular policy. Infinite horizon solves
/// (I - gamma P) V = R; a finite horizon h runs the truncated backward
/// recursion V_{t} = R + gamma P V_{t+1} instead. Absorbing states have
/// value 0 and rewards stop there.
inline std::vector<double> exact_state_values(const TabularMdp& mdp,
                                              std::span<const int> policy, double gamma,
                                              std::optional<int> h = std::nullopt) {
  detail::check_stochastic(mdp);
  const int n = mdp.num_states;
  // Row s of P under the policy; absorbing states pinned to a zero row.
  auto row = [&](int s) -> const std::vector<double>& { return mdp.prob[s][policy[s]]; };
  auto eff_reward = [&](int s) { return mdp.absorbing[s] ? 0.0 : mdp.reward[s]; };

  if (h.has_value()) {
    std::vector<double> v(n, 0.0), next(n, 0.0);
    // v holds the value of "k steps remaining"; k=0 contributes R(s) only.
    for (int s = 0; s < n; ++s) v[s] = eff_reward(s);
    for (int k = 1; k <= *h; ++k) {
      for (int s = 0; s < n; ++s) {
        if (mdp.absorbing[s]) {
          next[s] = 0.0;
          continue;
        }
        double acc = 0.0;
        const auto& p = row(s);
        for (int t = 0; t < n; ++t) acc += p[t] * v[t];
        next[s] = eff_reward(s) + gamma * acc;
      }
      std::swap(v, next);
    }
    return v;
  }

  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (int s = 0; s < n; ++s) {
    a[s][s] = 1.0;
    b[s] = eff_reward(s);
    if (mdp.absorbing[s]) continue;  // V(s) = 0 since reward is 0 and it self-loops
    const auto& p = row(s);
    for (int t = 0; t < n; ++t) a[s][t] -= gamma * p[t];
  }
  return detail::solve_linear(std::move(a), std::move(b));
}

/// Exact V(policy) under the initial distribution.
inline double exact_value_tabular(const TabularMdp& mdp, std::span<const int> policy, double gamma,
                                  std::optional<int> h = std::nullopt) {
  auto v = exact_state_values(mdp, policy, gamma, h);
  double out = 0.0;
  for (int s = 0; s < mdp.num_states; ++s) out += mdp.initial[s] * v[s];
  return out;
}

/// Piecewise-constant inverse CDF over a finite outcome table. Outcome k is
/// selected iff cumulative_{k-1} < p <= cumulative_k (closed on the left
/// boundary list), and p = 1 maps to the last outcome.
template <class Outcome>
class InverseCdf {
 public:
  InverseCdf(std::vector<Outcome> outcomes, std::vector<double> probabilities)
      : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty() || outcomes_.size() != probabilities.size())
      throw std::invalid_argument("inverse_cdf: outcome/probability size mismatch");
    double cum = 0.0;
    for (double p : probabilities) {
      if (!(p > 0.0)) throw std::invalid_argument("inverse_cdf: probabilities must be positive");
      cum += p;
      cumulative_.push_back(cum);
    }
    if (std::fabs(cum - 1.0) > 1e-12)
      throw std::invalid_argument("inverse_cdf: probabilities must sum to 1");
    cumulative_.back() = 1.0;
  }

  const Outcome& operator()(double p) const {
    for (std::size_t k = 0; k + 1 < cumulative_.size(); ++k) {
      if (p <= cumulative_[k]) return outcomes_[k];
    }
    return outcomes_.back();
  }

 private:
  std::vector<Outcome> outcomes_;
  std::vector<double> cumulative_;
};

template <class Outcome>
InverseCdf<Outcome> inverse_cdf_model(std::vector<Outcome> outcomes,
                                      std::vector<double> probabilities) {
  return InverseCdf<Outcome>(std::move(outcomes), std::move(probabilities));
}

/// Result of a pushforward check of a model transition against a reference
/// next-state distribution.
struct FidelityReport {
  bool pass = false;
  int n = 0;
  std::vector<std::string> outcome_names;
  std::vector<double> expected;  // reference probabilities
  std::vector<long> observed;    // draw counts
  std::vector<double> z_scores;  // per-outcome binomial z
  std::string diagnostic;
};

/// Draws n uniform noise vectors, pushes them through `sample`, and compares
/// outcome frequencies against `reference` at 3 binomial standard deviations.
/// An outcome outside the reference support fails immediately.
template <class Outcome, class Sampler, class Key>
FidelityReport fidelity_check(Sampler&& sample, int noise_dim,
                              const std::vector<std::pair<Outcome, double>>& reference,
                              int n, std::uint64_t seed, Key&& name_of) {
  if (n < 1000) throw std::invalid_argument("fidelity_check: n must be >= 1000");
  FidelityReport rep;
  rep.n = n;
  std::vector<long> counts(reference.size(), 0);
  Rng rng(seed);
  std::vector<double> p(noise_dim);
  for (int i = 0; i < n; ++i) {
    for (double& v : p) v = rng.next_uniform();
    Outcome out = sample(std::span<const double>(p));
    bool found = false;
    for (std::size_t k = 0; k < reference.size(); ++k) {
      if (reference[k].first == out) {
        ++counts[k];
        found = true;
        break;
      }
    }
    if (!found) {
      rep.pass = false;
      rep.diagnostic = "outcome outside reference support: " + name_of(out);
      return rep;
    }
  }
  rep.pass = true;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const double q = reference[k].second;
    rep.outcome_names.push_back(name_of(reference[k].first));
    rep.expected.push_back(q);
    rep.observed.push_back(counts[k]);
    const double sd = std::sqrt(q * (1.0 - q) * n);
    const double z = sd > 0.0 ? (counts[k] - q * n) / sd : (counts[k] == 0 ? 0.0 : 1e9);
    rep.z_scores.push_back(z);
    if (std::fabs(z) > 3.0) rep.pass = false;
  }
  return rep;
}

}  // namespace pegasus
