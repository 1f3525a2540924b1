#include "pegasus/bicycle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pegasus::bike {

namespace {

// Physical constants of the cited bicycle simulator.
constexpr double kGravity = 9.82;
constexpr double kSpeed = 10.0 / 3.6;  // m/s
constexpr double kWheelbase = 1.11;    // l
constexpr double kCmDist = 0.66;       // c, front contact to CM (horizontal)
constexpr double kCmHeight = 0.94;     // h
constexpr double kMassBike = 15.0;
constexpr double kMassTire = 1.7;
constexpr double kMassRider = 60.0;
constexpr double kMass = kMassBike + kMassRider;
constexpr double kTireRadius = 0.34;
constexpr double kSigmaDot = kSpeed / kTireRadius;
constexpr double kInertiaBike = (13.0 / 3.0) * kMassBike * kCmHeight * kCmHeight +
                                kMassRider * kCmHeight * kCmHeight;
constexpr double kInertiaDc = kMassTire * kTireRadius * kTireRadius;
constexpr double kInertiaDv = 1.5 * kMassTire * kTireRadius * kTireRadius;
constexpr double kInertiaDl = 0.5 * kMassTire * kTireRadius * kTireRadius;
constexpr double kMaxHandlebar = 1.3963;  // ~80 degrees
constexpr double kPi = 3.14159265358979323846;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

double distance_to_goal(const BikeState& s, const BicycleConfig& cfg) {
  const double dx = cfg.goal_distance - s.x;
  const double dy = -s.y;
  return std::sqrt(dx * dx + dy * dy);
}

double psi_to_goal(const BikeState& s, const BicycleConfig& cfg) {
  if (cfg.training_mode) return wrap_angle(s.heading);
  const double bearing = std::atan2(-s.y, cfg.goal_distance - s.x);
  return wrap_angle(s.heading - bearing);
}

FeatureVector features(const BikeState& s, const BicycleConfig& cfg) {
  const double psi = psi_to_goal(s, cfg);
  return FeatureVector{
      1.0,
      s.omega,
      s.omega_dot,
      s.theta,
      s.theta_dot,
      s.omega * s.omega,
      s.theta * s.theta,
      s.omega * s.theta,
      s.omega * s.theta_dot,
      s.omega_dot * s.theta,
      psi,
      std::sin(psi),
      std::cos(psi) - 1.0,
      s.omega * s.omega * s.theta,
      s.omega * s.theta * s.theta,
  };
}

BikeAction sigmoid_policy(const BikeWeights& w, const BikeState& s, const BicycleConfig& cfg) {
  const FeatureVector x = features(s, cfg);
  double z_tau = 0.0, z_nu = 0.0;
  for (int i = 0; i < kNumFeatures; ++i) {
    z_tau += w.w_tau[i] * x[i];
    z_nu += w.w_nu[i] * x[i];
  }
  BikeAction a;
  a.tau = sigmoid(z_tau) * (cfg.tau_max - cfg.tau_min) + cfg.tau_min;
  a.nu = sigmoid(z_nu) * (cfg.nu_max - cfg.nu_min) + cfg.nu_min;
  return a;
}

BikeState bike_step(const BikeState& s, const BikeAction& a, double p, double dt,
                    double noise_halfwidth) {
  if (s.fallen) return s;

  const double noise = noise_halfwidth * (2.0 * p - 1.0);
  const double displacement = a.nu + noise;

  // Effective turn radii; straight handlebars mean infinite radii.
  double inv_rf = 0.0, inv_rb = 0.0, inv_rcm = 0.0;
  if (s.theta != 0.0) {
    const double tan_theta = std::tan(s.theta);
    const double rb = kWheelbase / std::fabs(tan_theta);
    inv_rf = std::fabs(std::sin(s.theta)) / kWheelbase;
    inv_rb = 1.0 / rb;
    inv_rcm = 1.0 / std::sqrt((kWheelbase - kCmDist) * (kWheelbase - kCmDist) + rb * rb);
  }

  const double phi = s.omega + std::atan(displacement / kCmHeight);
  const double omega_dd =
      (kMass * kCmHeight * kGravity * std::sin(phi) -
       std::cos(phi) * (kInertiaDc * kSigmaDot * s.theta_dot +
                        sign_of(s.theta) * kSpeed * kSpeed *
                            (kMassTire * kTireRadius * (inv_rf + inv_rb) +
                             kMass * kCmHeight * inv_rcm))) /
      kInertiaBike;
  const double theta_dd = (a.tau - kInertiaDv * kSigmaDot * s.omega_dot) / kInertiaDl;

  BikeState next = s;
  next.omega_dot = s.omega_dot + omega_dd * dt;
  next.omega = s.omega + next.omega_dot * dt;
  next.theta_dot = s.theta_dot + theta_dd * dt;
  next.theta = s.theta + next.theta_dot * dt;
  if (std::fabs(next.theta) > kMaxHandlebar) {
    next.theta = sign_of(next.theta) * kMaxHandlebar;
    next.theta_dot = 0.0;
  }

  // Rear wheel advances along the pre-step heading; the heading then turns at
  // the rate set by the pre-step handlebar angle.
  next.x = s.x + kSpeed * dt * std::cos(s.heading);
  next.y = s.y + kSpeed * dt * std::sin(s.heading);
  next.heading = wrap_angle(s.heading + kSpeed * dt * sign_of(s.theta) * inv_rb);

  if (std::fabs(next.omega) > kFallThreshold) next.fallen = true;
  return next;
}

double shaping_reward(const BikeState& prev, const BikeState& next, double scale,
                      const BicycleConfig& cfg) {
  if (cfg.training_mode) return scale * (next.x - prev.x);  // goal at +infinity along x
  return scale * (distance_to_goal(prev, cfg) - distance_to_goal(next, cfg));
}

double goal_entry_fraction(const BikeState& prev, const BikeState& next,
                           const BicycleConfig& cfg) {
  const double r = cfg.goal_radius;
  const double d_prev = distance_to_goal(prev, cfg);
  const double d_next = distance_to_goal(next, cfg);
  if (!(d_prev > r) || !(d_next <= r))
    throw std::invalid_argument("goal_entry_fraction: step does not enter the goal disc");
  const double dx = prev.x - cfg.goal_distance;
  const double dy = prev.y;
  const double ux = next.x - prev.x;
  const double uy = next.y - prev.y;
  const double a = ux * ux + uy * uy;
  const double b = dx * ux + dy * uy;
  const double c = dx * dx + dy * dy - r * r;
  if (a == 0.0) throw std::invalid_argument("goal_entry_fraction: degenerate step");
  const double disc = b * b - a * c;
  const double sd = std::sqrt(std::max(disc, 0.0));
  double tau = (-b - sd) / a;  // first crossing
  if (tau < 0.0) tau = 0.0;
  if (tau > 1.0) tau = 1.0;
  return tau;
}

BikeModel build_bicycle_model(const BicycleConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.noise_halfwidth >= 0.0) || cfg.horizon < 1 ||
      !(cfg.gamma > 0.0 && cfg.gamma < 1.0) || !(cfg.goal_radius > 0.0) ||
      !(cfg.goal_distance > cfg.goal_radius) || !(cfg.tau_max >= cfg.tau_min) ||
      !(cfg.nu_max >= cfg.nu_min))
    throw std::invalid_argument("build_bicycle_model: invalid config");

  BikeModel model;
  model.state_kind = StateKind::Continuous;
  model.state_dim = 7;
  model.noise_dim = 1;
  model.gamma = cfg.gamma;
  model.r_max = std::max(1.0, std::fabs(cfg.fall_penalty));

  model.reward = [cfg](const BikeSimState& s) {
    switch (s.phase) {
      case Phase::Riding: return cfg.shaping_scale == 0.0 ? 0.0 : s.last_progress * cfg.shaping_scale;
      case Phase::FreshFallen: return cfg.fall_penalty;
      case Phase::FreshGoal: return 1.0;
      case Phase::Done: return 0.0;
    }
    return 0.0;
  };

  model.absorbing = [](const BikeSimState& s) { return s.phase == Phase::Done; };

  model.transition = [cfg](const BikeSimState& s, const BikeAction& a,
                           std::span<const double> p) -> BikeSimState {
    if (s.phase != Phase::Riding) {
      BikeSimState done = s;
      done.phase = Phase::Done;
      done.last_progress = 0.0;
      return done;
    }
    BikeSimState next;
    next.bike = bike_step(s.bike, a, p[0], cfg.dt, cfg.noise_halfwidth);
    if (next.bike.fallen) {
      next.phase = Phase::FreshFallen;
      return next;
    }
    if (!cfg.training_mode && distance_to_goal(s.bike, cfg) > cfg.goal_radius &&
        distance_to_goal(next.bike, cfg) <= cfg.goal_radius) {
      next.phase = Phase::FreshGoal;
      next.goal_tau = goal_entry_fraction(s.bike, next.bike, cfg);
      return next;
    }
    next.phase = Phase::Riding;
    // Progress in meters; the reward hook scales it.
    next.last_progress = shaping_reward(s.bike, next.bike, 1.0, cfg);
    return next;
  };

  model.goal_fraction = [](const BikeSimState&, const BikeSimState& next)
      -> std::optional<double> {
    if (next.phase == Phase::FreshGoal) return next.goal_tau;
    return std::nullopt;
  };

  model.initial = [cfg](Rng& rng) {
    BikeSimState s;
    s.bike.omega = rng.next_uniform(-cfg.init_tilt, cfg.init_tilt);
    s.bike.omega_dot = rng.next_uniform(-cfg.init_rate, cfg.init_rate);
    s.bike.theta = rng.next_uniform(-cfg.init_tilt, cfg.init_tilt);
    s.bike.theta_dot = rng.next_uniform(-cfg.init_rate, cfg.init_rate);
    s.bike.heading = rng.next_uniform(-cfg.init_heading, cfg.init_heading);
    return s;
  };

  return model;
}

RideStats evaluate_ride(const BicycleConfig& cfg, const BikeWeights& w, std::uint64_t seed,
                        std::uint64_t ride_index, int max_steps) {
  const BikeModel model = build_bicycle_model(cfg);
  Rng rng = Rng::substream(seed, ride_index);
  BikeSimState s = model.initial(rng);
  const double d0 = distance_to_goal(s.bike, cfg);
  double d_horizon = d0;

  RideStats stats;
  BikePolicyFn policy{&w, &cfg};
  for (int t = 0; t < max_steps; ++t) {
    const double p[1] = {rng.next_uniform()};
    BikeSimState next = model.transition(s, policy(s), std::span<const double>(p, 1));
    if (next.phase == Phase::FreshFallen) {
      if (t + 1 <= cfg.horizon) stats.fell = true;
      stats.steps_survived = std::min(t + 1, cfg.horizon);
      stats.steps_ridden = t + 1;
      if (t + 1 <= cfg.horizon) d_horizon = distance_to_goal(next.bike, cfg);
      break;
    }
    if (next.phase == Phase::FreshGoal) {
      stats.goal_reached = true;
      stats.steps_ridden = t + 1;
      stats.steps_survived = std::min(t + 1, cfg.horizon);
      if (t + 1 <= cfg.horizon) d_horizon = distance_to_goal(next.bike, cfg);
      break;
    }
    s = next;
    if (t + 1 <= cfg.horizon) d_horizon = distance_to_goal(s.bike, cfg);
    stats.steps_survived = std::min(t + 1, cfg.horizon);
    stats.steps_ridden = t + 1;
  }
  stats.progress = d0 - d_horizon;
  stats.path_length = kSpeed * cfg.dt * stats.steps_ridden;
  return stats;
}

}  // namespace pegasus::bike
