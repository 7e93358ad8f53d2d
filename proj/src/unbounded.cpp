#include "fcool/unbounded.hpp"

#include <cmath>
#include <sstream>

#include "fcool/error.hpp"

namespace fcool {

namespace {

void check_inputs(double gamma, double T) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be > 1");
  if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorCode::InvalidArgument, "horizon must be > 0");
}

double hypot_gt(double gamma, double T) { return std::hypot(gamma, T); }

// Radicand of x1^2 in normalized time tau = t/T: (B^2 - T^2) tau^2 + 2 B tau + 1,
// written with B^2 - T^2 = c T^2 to avoid cancellation at large T.
double x1_squared(double tau, double gamma, double T) {
  const double B = hypot_gt(gamma, T) - 1.0;
  const double c = arc_constant(gamma, T).c;
  return c * T * T * tau * tau + 2.0 * B * tau + 1.0;
}

}  // namespace

SingularArc arc_constant(double gamma, double T) {
  check_inputs(gamma, T);
  // (B/T)^2 - 1 rearranged as (gamma^2 + 1 - 2 sqrt(gamma^2 + T^2)) / T^2.
  return {(gamma * gamma + 1.0 - 2.0 * hypot_gt(gamma, T)) / (T * T)};
}

double singular_x1(double t, double gamma, double T) {
  check_inputs(gamma, T);
  if (t < 0.0 || t > T) fail(ErrorCode::InvalidArgument, "t must lie in [0, T]");
  const double r = x1_squared(t / T, gamma, T);
  if (!(r > 0.0)) fail(ErrorCode::Internal, "singular arc radicand is not positive");
  return std::sqrt(r);
}

double singular_x2(double t, double gamma, double T) {
  const double x1 = singular_x1(t, gamma, T);
  const double B = hypot_gt(gamma, T) - 1.0;
  const double c = arc_constant(gamma, T).c;
  // d(x1^2)/dt = 2 (c t + B / T)
  return (c * t + B / T) / x1;
}

double terminal_velocity(double gamma, double T) {
  check_inputs(gamma, T);
  return (gamma * gamma - hypot_gt(gamma, T)) / (gamma * T);
}

UnboundedSynthesis build_protocol(double gamma, double T) {
  check_inputs(gamma, T);
  UnboundedSynthesis out;
  out.gamma = gamma;
  out.horizon = T;
  out.arc = arc_constant(gamma, T);
  out.B = hypot_gt(gamma, T) - 1.0;
  out.initial_weight = -out.B / T;
  out.terminal_velocity = terminal_velocity(gamma, T);
  out.final_weight = out.terminal_velocity / gamma;
  out.average_energy = average_energy(gamma, T);
  out.protocol.impulse(out.initial_weight).singular(T).impulse(out.final_weight);
  return out;
}

double average_energy(double gamma, double T) {
  check_inputs(gamma, T);
  const double s = hypot_gt(gamma, T);
  // ln((T + s) / gamma) == asinh(T / gamma), stable as T/gamma -> 0.
  return (gamma * gamma + 1.0 - 2.0 * s + 2.0 * T * std::asinh(T / gamma)) / (T * T);
}

double average_energy_slope(double gamma, double T) {
  check_inputs(gamma, T);
  return -2.0 * appendix_f(gamma, T) / (T * T * T);
}

FreeTimeOptimum free_time_optimum(double gamma) {
  if (!(gamma > 1.0)) fail(ErrorCode::InvalidArgument, "gamma must be > 1");
  return {(gamma * gamma - 1.0) / 2.0, 0.0};
}

double appendix_f(double gamma, double T) {
  if (!(T >= 0.0)) fail(ErrorCode::InvalidArgument, "T must be >= 0");
  return gamma * gamma + 1.0 - 2.0 * hypot_gt(gamma, T) + T * std::asinh(T / gamma);
}

double appendix_g(double gamma, double T) {
  if (!(T >= 0.0)) fail(ErrorCode::InvalidArgument, "T must be >= 0");
  return std::asinh(T / gamma) - T / hypot_gt(gamma, T);
}

double turning_horizon(double gamma) {
  if (!(gamma > 1.0)) fail(ErrorCode::InvalidArgument, "gamma must be > 1");
  return gamma * std::sqrt(gamma * gamma - 1.0);
}

}  // namespace fcool
