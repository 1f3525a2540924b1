#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "pegasus/sim_model.hpp"

namespace pegasus::bike {

/// Bicycle pose: tilt, handlebar angle and their rates, plus world-frame
/// heading and rear-wheel position. `fallen` is set once the tilt magnitude
/// exceeds pi/15; exactly pi/15 still counts as upright.
struct BikeState {
  double omega = 0.0;      // tilt angle (rad)
  double omega_dot = 0.0;  // tilt rate (rad/s)
  double theta = 0.0;      // handlebar angle (rad)
  double theta_dot = 0.0;  // handlebar rate (rad/s)
  double heading = 0.0;    // world-frame heading (rad)
  double x = 0.0;          // rear-wheel position (m)
  double y = 0.0;
  bool fallen = false;
  bool operator==(const BikeState&) const = default;
};

struct BikeAction {
  double tau = 0.0;  // handlebar torque
  double nu = 0.0;   // rider center-of-gravity displacement (m)
};

inline constexpr double kFallThreshold = 0.20943951023931954923;  // pi/15
inline constexpr int kNumFeatures = 15;

using FeatureVector = std::array<double, kNumFeatures>;

struct BikeWeights {
  std::array<double, kNumFeatures> w_tau{};
  std::array<double, kNumFeatures> w_nu{};
};

/// Environment configuration. Dynamics constants follow the cited trailer-free
/// bicycle simulator; everything here is a config default, not a claim.
struct BicycleConfig {
  double dt = 0.01;               // integration step (s)
  double noise_halfwidth = 0.02;  // uniform displacement noise (m)
  double tau_min = -2.0, tau_max = 2.0;
  double nu_min = -0.02, nu_max = 0.02;
  double shaping_scale = 0.05;    // progress reward per meter
  double fall_penalty = -1.0;
  double gamma = 0.998;
  int horizon = 500;
  int m_scenarios = 30;
  double goal_radius = 10.0;
  double goal_distance = 1000.0;  // goal sits at (goal_distance, 0)
  bool training_mode = true;      // goal "infinitely distant" along +x
  std::uint64_t seed = 1;

  // Initial-state spread: a typical riding state, not fine-tuned.
  double init_tilt = 0.02;     // |omega|, |theta| bound (rad)
  double init_rate = 0.02;     // |omega_dot|, |theta_dot| bound (rad/s)
  double init_heading = 0.5235987755982988;  // |heading| bound (rad), pi/6
};

/// Heading relative to the goal: the world heading in training mode (goal at
/// infinity along +x), otherwise measured against the bearing to the goal
/// center, wrapped to (-pi, pi].
double psi_to_goal(const BikeState& s, const BicycleConfig& cfg);

double distance_to_goal(const BikeState& s, const BicycleConfig& cfg);

/// The fixed 15-entry feature list:
/// 1, omega, omega_dot, theta, theta_dot, omega^2, theta^2, omega*theta,
/// omega*theta_dot, omega_dot*theta, psi, sin(psi), cos(psi) - 1,
/// omega^2*theta, omega*theta^2.
FeatureVector features(const BikeState& s, const BicycleConfig& cfg);

/// tau = sigma(w1 . x)(tau_max - tau_min) + tau_min and likewise for nu,
/// sigma(z) = 1 / (1 + e^-z). Outputs always lie inside the action bounds.
BikeAction sigmoid_policy(const BikeWeights& w, const BikeState& s, const BicycleConfig& cfg);

/// One integration step of the tilt/steer/position dynamics with the noise
/// value p in [0,1] mapped to a displacement offset halfwidth * (2p - 1).
/// A fallen input is returned unchanged.
BikeState bike_step(const BikeState& s, const BikeAction& a, double p, double dt,
                    double noise_halfwidth);

/// scale * (distance-to-goal of prev - distance-to-goal of next).
double shaping_reward(const BikeState& prev, const BikeState& next, double scale,
                      const BicycleConfig& cfg);

/// Fraction tau in [0,1] of the step at which the segment prev->next first
/// crosses the goal-disc boundary. Requires prev outside and next inside.
double goal_entry_fraction(const BikeState& prev, const BikeState& next,
                           const BicycleConfig& cfg);

/// Model state: the pose plus one-shot reward bookkeeping. `last_progress`
/// carries the step's progress toward the goal into the state-only reward;
/// fresh goal/fall states deliver their reward once and then absorb.
enum class Phase { Riding, FreshGoal, FreshFallen, Done };

struct BikeSimState {
  BikeState bike;
  Phase phase = Phase::Riding;
  double last_progress = 0.0;
  double goal_tau = 0.0;
  bool operator==(const BikeSimState&) const = default;
};

using BikeModel = SimModel<BikeSimState, BikeAction>;

/// Builds the simulative model for a config. In training mode the goal disc is
/// disabled and progress is measured along the fixed goal direction.
BikeModel build_bicycle_model(const BicycleConfig& cfg);

/// Policy adapter for the model state.
struct BikePolicyFn {
  const BikeWeights* weights;
  const BicycleConfig* cfg;
  BikeAction operator()(const BikeSimState& s) const {
    return sigmoid_policy(*weights, s.bike, *cfg);
  }
};

struct RideStats {
  bool fell = false;
  int steps_survived = 0;       // within the config horizon
  double progress = 0.0;        // distance-to-goal decrease over the horizon window
  bool goal_reached = false;
  double path_length = 0.0;     // meters ridden until goal/fall/limit
  int steps_ridden = 0;
};

/// Deterministic evaluation ride: runs until goal, fall, or max_steps, with
/// the horizon-window stats taken at cfg.horizon steps.
RideStats evaluate_ride(const BicycleConfig& cfg, const BikeWeights& w, std::uint64_t seed,
                        std::uint64_t ride_index, int max_steps);

}  // namespace pegasus::bike
