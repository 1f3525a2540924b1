#include "pegasus/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace pegasus::theory {

namespace {
constexpr double kE = 2.718281828459045235360287471353;
}

void BoundInputs::validate() const {
  if (!(epsilon > 0.0)) throw std::domain_error("bounds: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("bounds: delta must be in (0,1)");
  if (d < 0) throw std::domain_error("bounds: d must be >= 0");
  if (d_s < 1 || d_p < 1) throw std::domain_error("bounds: d_s and d_p must be >= 1");
  if (!(b >= 1.0) || !(b_r >= 1.0)) throw std::domain_error("bounds: B and B_R must be >= 1");
  if (h_eps < 0) throw std::domain_error("bounds: h_eps must be >= 0");
  if (!(m_big > 0.0)) throw std::domain_error("bounds: M must be > 0");
}

double covering_log_bound(double epsilon, double m_big, int d) {
  if (!(epsilon > 0.0) || !(m_big > 0.0) || epsilon > m_big || d < 0)
    throw std::domain_error("covering_bound: requires 0 < epsilon <= M and d >= 0");
  const double x = 2.0 * kE * m_big / epsilon;  // > 2e, so ln(x) > 1
  return std::log(2.0) + d * (std::log(x) + std::log(std::log(x)));
}

double covering_bound(double epsilon, double m_big, int d) {
  return std::exp(covering_log_bound(epsilon, m_big, d));
}

double capacity_log_bound(const BoundInputs& in) {
  if (!(in.epsilon > 0.0)) throw std::domain_error("capacity_log_bound: epsilon must be > 0");
  const double h = static_cast<double>(in.h_eps);
  const double width = in.d_s + h * in.d_p;  // d_s + H d_p
  const double log_b0 = std::log(width * in.b);
  const double log_base = std::log(2.0 * kE) + std::log(width) + std::log(h + 1.0) +
                          h * log_b0 + std::log(in.b_r) - std::log(in.epsilon);
  return in.d_s * h * std::log(2.0) + 2.0 * in.d * in.d_s * h * log_base;
}

double sample_size_bound(const BoundInputs& in) {
  in.validate();
  const double h1 = static_cast<double>(in.h_eps) + 1.0;
  const double eps_step = in.epsilon / (2.0 * h1);
  const double delta_step = in.delta / h1;

  BoundInputs capacity_in = in;
  capacity_in.epsilon = eps_step / 16.0;
  const double log_capacity = capacity_log_bound(capacity_in);

  const double factor = 256.0 * in.m_big * in.m_big / (eps_step * eps_step);
  const double m = factor * (std::log(1.0 / delta_step) + std::log(4.0) + log_capacity);
  return std::ceil(m);
}

}  // namespace pegasus::theory
