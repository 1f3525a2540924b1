#pragma once

#include <cstdint>
#include <string>

#include "pegasus/evasion.hpp"
#include "pegasus/sim_model.hpp"

namespace pegasus::theory {

/// States of the four-state MDP whose deterministic simulative model defeats
/// uniform convergence: the start state moves to Minus or Plus (reward -1 / +1)
/// depending on whether the noise value lands in the action's interval union,
/// and both transition to the absorbing state. Every action's union has
/// measure exactly 1/2, so the true value of every constant policy is 0.
enum class CxState { Start, Plus, Minus, Absorbed };

/// A constant policy: always plays the action identified by an enumeration
/// index, realized as the corresponding interval union.
struct CxAction {
  const IntervalUnion* membership = nullptr;
};

/// The countable action list: action a_i is defined by the i-th canonical
/// measure-1/2 union. Inverse of the evading construction's reported index.
inline IntervalUnion union_for_action(const mpz_class& index) { return union_from_index(index); }

using CxModel = SimModel<CxState, CxAction>;

/// The adversarial model: g(start, a_i, p) = Minus iff p is in U_i.
/// Episodes are two steps and undiscounted (gamma = 1), which rollout
/// tolerates because every trajectory is absorbed by step 2.
CxModel build_counterexample_model();

/// The benign model for the same MDP: g(start, a, p) = Minus iff p <= 1/2,
/// ignoring the action entirely.
CxModel build_simple_counterexample_model();

struct CounterexampleReport {
  int m = 0;
  mpz_class policy_index;
  Rational union_measure;
  double v_hat = 0.0;
  double v_true = 0.0;
  double gap = 0.0;
};

/// Draws m scenarios, finds a union evading all first-step noise entries,
/// and evaluates the corresponding constant policy with the generic scenario
/// estimator: v_hat comes out exactly 1 while the analytic value
/// 1 - 2 * measure is exactly 0.
CounterexampleReport counterexample_demo(int m, int h, std::uint64_t seed);

/// Largest |v_hat| over the constant policies with enumeration indices
/// 1..num_policies, evaluated on m scenarios of the benign model. Decays like
/// m^{-1/2}: no adversarial evasion is possible.
double simple_model_max_deviation(int m, int num_policies, std::uint64_t seed);

}  // namespace pegasus::theory
