#pragma once

// Reference integrator for the rescaled Ermakov system under a protocol.

#include <cstddef>
#include <string>

#include "fcool/core_model.hpp"

namespace fcool {

enum class IntegratorMethod { RK4, RK45 };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::RK4;
  /// RK4 step; <= 0 selects min(1e-4, T / 1e5).
  double step = 0.0;
  /// RK45 absolute and relative tolerance, in (0, 1e-3].
  double tolerance = 1e-10;
  std::size_t max_steps = 100'000'000;
  /// Keep every k-th integration step in Trajectory::samples (segment ends are always kept).
  std::size_t record_every = 1;

  void validate() const;
  double resolved_step(double horizon) const noexcept;
};

/// Trajectories with x1 at or below this are reported as escaped.
inline constexpr double kEscapeX1 = 1e-6;

/// Integrates (x1, x2) from (1, 0) through every segment. Impulses are exact
/// jumps; the running cost and the phase integral of 1/x1^2 are carried as
/// extra state components.
Trajectory simulate(const CoolingProblem& problem, const Protocol& protocol, const IntegratorConfig& cfg = {});

/// Max over interior samples of |x2' + u x1 - 1/x1^3| with x2' from central
/// differences. Samples adjacent to a segment boundary are skipped.
double ermakov_residual(const Trajectory& trajectory, const Protocol& protocol);

struct BoundaryReport {
  double initial_position = 0.0;  // |b(0) - 1|
  double initial_velocity = 0.0;  // |bdot(0)|
  double final_position = 0.0;    // |b(T) - gamma|
  double final_velocity = 0.0;    // |bdot(T)|
  // u(0) = 1 and u(T) = 1/gamma^4 belong to the full problem only.
  double initial_control = 0.0;
  double final_control = 0.0;
  std::string control_conditions = "relaxed-problem: not enforced";

  double max_enforced() const noexcept;
};

BoundaryReport boundary_check(const Trajectory& trajectory, double gamma);

}  // namespace fcool
