#pragma once

#include <cmath>
#include <stdexcept>

namespace pegasus {

/// Smallest integer H >= 0 such that gamma^H * r_max / (1 - gamma) <= epsilon / 2.
/// This is the epsilon-horizon time: truncating a discounted reward sum after
/// H steps changes it by at most epsilon/2.
inline int horizon_time(double epsilon, double gamma, double r_max) {
  if (!(epsilon > 0.0)) throw std::domain_error("horizon_time: epsilon must be > 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::domain_error("horizon_time: gamma must be in [0,1)");
  if (!(r_max > 0.0)) throw std::domain_error("horizon_time: r_max must be > 0");

  const double tail0 = r_max / (1.0 - gamma);
  const double target = epsilon / 2.0;
  if (tail0 <= target) return 0;
  if (gamma == 0.0) return 1;

  // Log-space guess, then fix up so "smallest" holds exactly under double
  // evaluation of the tail bound.
  int h = static_cast<int>(std::ceil(std::log(target / tail0) / std::log(gamma)));
  if (h < 0) h = 0;
  auto tail = [&](int k) { return std::pow(gamma, k) * tail0; };
  while (tail(h) > target) ++h;
  while (h > 0 && tail(h - 1) <= target) --h;
  return h;
}

}  // namespace pegasus
