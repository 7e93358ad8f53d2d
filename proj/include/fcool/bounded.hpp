#pragma once

// Syntheses under the symmetric bound |u| <= 1: the minimum-time bang-bang
// transfer and the fixed-time bang-singular-bang protocol.

#include <functional>

#include "fcool/core_model.hpp"

namespace fcool {

struct BangBangSolution {
  double gamma = 0.0;
  double T1 = 0.0;  // duration of the u = -1 arc
  double T2 = 0.0;  // duration of the u = +1 arc, always pi/4
  double T_min = 0.0;
  double x1_joint = 0.0;
  Protocol protocol;  // [Bang(-1, T1), Bang(+1, T2)]
};

BangBangSolution min_time(double gamma);

/// Upper-half-plane branches of the two bang arcs through the endpoints.
/// first: x2^2 - x1^2 + 1/x1^2 = 0 (u = -1 through (1, 0)), defined for x1 >= 1.
/// second: x2^2 + x1^2 + 1/x1^2 = gamma^2 + 1/gamma^2 (u = +1 through (gamma, 0)),
/// defined for 1/gamma <= x1 <= gamma.
double first_arc_x2(double x1);
double second_arc_x2(double gamma, double x1);

struct BangArcs {
  std::function<double(double)> first;
  std::function<double(double)> second;
};
BangArcs bang_arcs(double gamma);

struct Junctions {
  double x1_a = 0.0;  // leaves the u = -1 arc
  double x1_b = 0.0;  // joins the u = +1 arc
};
Junctions junctions_from_c(double gamma, double c);

struct SegmentTimes {
  double T1p = 0.0;
  double T2p = 0.0;
  double T3p = 0.0;
  double total() const noexcept { return T1p + T2p + T3p; }
};
SegmentTimes segment_times(double gamma, double c);

/// Largest admissible arc constant: the singular arc through the bang-bang
/// switching point. Total time decreases from segment_times(gamma, 0) to
/// T_min as c runs over [0, max_arc_constant].
double max_arc_constant(double gamma);

struct BangSingularBang {
  double gamma = 0.0;
  double horizon = 0.0;
  double c = 0.0;
  double T1p = 0.0;
  double T2p = 0.0;
  double T3p = 0.0;
  double x1_a = 0.0;
  double x1_b = 0.0;
  Protocol protocol;  // [Bang(-1, T1p), Singular(T2p), Bang(+1, T3p)]
};

BangSingularBang bang_singular_bang(double gamma, double c);

/// Solves T1p(c) + T2p(c) + T3p(c) = T for c in [0, max_arc_constant].
/// Infeasible when T < T_min, UnsupportedRegion when T needs c < 0.
BangSingularBang solve_c(double gamma, double T);

/// Closed-form state at time t in [0, horizon].
State state_at(const BangSingularBang& synthesis, double t);
State state_at(const BangBangSolution& solution, double t);

struct BoundedEnergy {
  double average_energy = 0.0;
  double first_arc = 0.0;  // integral of x2^2 + 1/x1^2 over each segment
  double singular_arc = 0.0;
  double second_arc = 0.0;
  BangSingularBang synthesis;
};

/// Time-averaged energy of the bang-singular-bang protocol solving (gamma, T).
BoundedEnergy bounded_energy(double gamma, double T);
double bounded_energy_value(double gamma, double T);

/// True iff the bang-bang switching point lies above the c = 0 singular arc
/// x2 = 1 / x1, i.e. gamma^8 - 6 gamma^4 + 1 > 0.
bool joint_above_c0_arc(double gamma);

}  // namespace fcool
