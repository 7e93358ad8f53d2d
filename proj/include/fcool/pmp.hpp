#pragma once

// Maximum-principle machinery for the cooling problem and its fixed-energy
// time-optimal dual.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "fcool/core_model.hpp"
#include "fcool/unbounded.hpp"

namespace fcool {

double control_hamiltonian(const State& s, const AdjointState& a, double u);

/// (dlambda1/dt, dlambda2/dt) = (-dH/dx1, -dH/dx2).
std::pair<double, double> adjoint_derivative(const State& s, const AdjointState& a, double u);

/// Phi = -lambda2; the Hamiltonian is linear in u with this coefficient up to x1 > 0.
inline double switching_function(const AdjointState& a) noexcept { return -a.lambda2(); }

/// Costate that keeps lambda2 = 0: lambda1 = -lambda0 x2. With lambda0 = 0 this
/// collapses to the zero vector and raises ErrorCode::MaximumPrinciple.
AdjointState singular_adjoint(const State& s, double lambda0 = -1.0);

/// State of the augmented dual system; x3 tracks the energy budget.
struct AugmentedState {
  double x1 = 1.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double Ebar = 0.0;
};

using Vec3 = std::array<double, 3>;

/// Drift f = (x2, 1/x1^3, x2^2 + 1/x1^2 - Ebar) of the augmented system.
Vec3 augmented_drift(const AugmentedState& s);
/// Control field g = (0, -x1, 0).
Vec3 augmented_control_field(const AugmentedState& s);

struct LieDeterminants {
  double D = 0.0;        // det(g, [f,g], [g,[f,g]])
  double Dprime = 0.0;   // det(g, [f,g], [f,[f,g]])
  double Dsecond = 0.0;  // det(g, [f,g], f)

  /// Singular control -D'/D of the time-optimal dual.
  double singular_control() const noexcept { return -Dprime / D; }
};

/// Closed forms (-2 x1^4, 4, 1 - x1^2 (Ebar + x2^2)).
LieDeterminants lie_determinants(const AugmentedState& s);

/// Same determinants assembled from brackets [X,Y] = (dY/dx) X - (dX/dx) Y,
/// with every Jacobian-vector product taken by central differences and one
/// Richardson step.
LieDeterminants numeric_lie_determinants(const AugmentedState& s, double step = 2e-3);

double det3(const Vec3& a, const Vec3& b, const Vec3& c) noexcept;

/// Ebar + c, which has the sign of D D''.
inline double hyperbolicity_margin(const SingularArc& arc, double Ebar) noexcept { return Ebar + arc.c; }
bool hyperbolic_test(const SingularArc& arc, double Ebar);

struct ControlLaw {
  enum class Kind { Constant, SingularFeedback };
  Kind kind = Kind::SingularFeedback;
  double u = 0.0;

  static ControlLaw constant(double u) { return {Kind::Constant, u}; }
  static ControlLaw singular() { return {Kind::SingularFeedback, 0.0}; }
  double operator()(double x1) const noexcept { return kind == Kind::Constant ? u : singular_feedback(x1); }
};

struct ExtremalSample {
  double t = 0.0;
  State state;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double hamiltonian = 0.0;
};

struct ExtremalRun {
  std::vector<ExtremalSample> samples;
  double max_hamiltonian_drift = 0.0;  // max |H(t) - H(0)|
  double max_abs_lambda2 = 0.0;
};

/// Integrates state and costate jointly (RK4, fixed step) with lambda0 held constant.
ExtremalRun integrate_extremal(const State& x0, const AdjointState& a0, ControlLaw law, double horizon,
                               double step = 1e-3, std::size_t record_every = 100);

struct ConjugateScan {
  std::optional<double> conjugate_time;  // first t > 0 with delta x1 = 0
  std::optional<double> collinear_time;  // first t > 0 with delta x1 = delta x3 = 0
  double min_negative_dx1 = 0.0;         // min over (0, T] of -delta x1
  bool dx1_strictly_decreasing = true;
  std::size_t grid_points = 0;
  Vec3 final_variation{};
};

/// Integrates the variational system along the singular arc of build_protocol(gamma, T),
/// starting from delta x(0) = g(0) = (0, -1, 0).
ConjugateScan conjugate_point_scan(double gamma, double T, std::size_t grid_points = 10000);

}  // namespace fcool
