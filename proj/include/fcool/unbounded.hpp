#pragma once

// Impulse - singular - impulse synthesis for unbounded control.

#include "fcool/core_model.hpp"

namespace fcool {

/// Member of the singular family x2^2 - 1/x1^2 = c.
struct SingularArc {
  double c = 0.0;
};

struct UnboundedSynthesis {
  double gamma = 0.0;
  double horizon = 0.0;
  SingularArc arc;
  double B = 0.0;  // sqrt(gamma^2 + T^2) - 1
  double initial_weight = 0.0;
  double final_weight = 0.0;
  double terminal_velocity = 0.0;  // x2(T-)
  double average_energy = 0.0;
  Protocol protocol;
};

/// Horizons below this are accepted but lose precision (c grows like 1/T^2).
inline constexpr double kMinReliableHorizon = 1e-6;

/// x1(t) along the singular arc joining x1 = 1 to x1 = gamma in time T.
double singular_x1(double t, double gamma, double T);
/// x2(t) = dx1/dt along the same arc.
double singular_x2(double t, double gamma, double T);

SingularArc arc_constant(double gamma, double T);
double terminal_velocity(double gamma, double T);
UnboundedSynthesis build_protocol(double gamma, double T);

/// Time-averaged energy in units of (n + 1/2) hbar omega0.
double average_energy(double gamma, double T);
/// Analytic dE/dT = -2 f(T) / T^3.
double average_energy_slope(double gamma, double T);

struct FreeTimeOptimum {
  double horizon = 0.0;
  double c = 0.0;
};
FreeTimeOptimum free_time_optimum(double gamma);

/// Monotonicity helpers: dE/dT = -2 f / T^3 and df/dT = g.
double appendix_f(double gamma, double T);
double appendix_g(double gamma, double T);

/// Horizon gamma sqrt(gamma^2 - 1) at which c reaches its minimum -1/gamma^2 and x2(T-) = 0.
double turning_horizon(double gamma);

}  // namespace fcool
