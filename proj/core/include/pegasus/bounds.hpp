#pragma once

namespace pegasus::theory {

/// Inputs of the sample-complexity calculators. B and B_R are uniform
/// Lipschitz bounds of the coordinate-dynamics families and the reward, d is
/// a pseudo-dimension bound per coordinate family (always supplied by the
/// user, never computed here), and m_big is the reward magnitude bound M.
struct BoundInputs {
  double epsilon = 0.0;
  double delta = 0.0;
  int d = 0;
  int d_s = 0;
  int d_p = 0;
  double b = 1.0;
  double b_r = 1.0;
  int h_eps = 0;
  double m_big = 1.0;

  void validate() const;
};

/// Covering-number bound for a pseudo-dimension-d family into [0, M]:
/// 2 * ((2eM/eps) * ln(2eM/eps))^d. Requires 0 < eps <= M.
double covering_bound(double epsilon, double m_big, int d);

/// Natural log of covering_bound, evaluated without forming the power.
double covering_log_bound(double epsilon, double m_big, int d);

/// Natural log of the capacity bound of the composed scenario-to-reward maps:
///   ln [ 2^(d_s H) * (2e (d_s + H d_p) (H+1) B0^H B_R / eps)^(2 d d_s H) ]
/// with B0 = (d_s + H d_p) B and H = h_eps, computed entirely in log space.
double capacity_log_bound(const BoundInputs& in);

/// Scenario count sufficient for |V_hat - V| <= epsilon to hold for all
/// policies with probability 1 - delta: the per-step reduction uses accuracy
/// epsilon / (2 (H+1)) and confidence delta / (H+1), and the per-step count is
///   (256 M^2 / eps_step^2) * (ln(1/delta_step) + ln 4 + lnC(eps_step/16)).
/// The 256 M^2 constant is the deviation bound's 64 M'^2 applied to rewards
/// spanning [-M, M], i.e. M' = 2M; with the M = 1 normalization this is the
/// plain 256/eps^2 factor. Returns the ceiling as a double (the count can
/// exceed any integer type).
double sample_size_bound(const BoundInputs& in);

}  // namespace pegasus::theory
