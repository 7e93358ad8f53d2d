#include "fcool/pmp.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <cmath>
#include <limits>

#include "fcool/error.hpp"

namespace fcool {

namespace odeint = boost::numeric::odeint;

namespace {

void require_positive_x1(double x1) {
  if (!(x1 > 0.0)) fail(ErrorCode::Domain, "x1 must be > 0");
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

using Field = Vec3 (*)(const AugmentedState&);

AugmentedState shifted(const AugmentedState& s, const Vec3& dir, double h) {
  return {s.x1 + h * dir[0], s.x2 + h * dir[1], s.x3 + h * dir[2], s.Ebar};
}

// (dF/dx) v by a Richardson-extrapolated central difference.
template <class F>
Vec3 jvp(const F& field, const AugmentedState& s, const Vec3& v, double h) {
  auto central = [&](double step) {
    const Vec3 plus = field(shifted(s, v, step));
    const Vec3 minus = field(shifted(s, v, -step));
    return Vec3{(plus[0] - minus[0]) / (2 * step), (plus[1] - minus[1]) / (2 * step),
                (plus[2] - minus[2]) / (2 * step)};
  };
  const Vec3 coarse = central(h);
  const Vec3 fine = central(0.5 * h);
  return {(4 * fine[0] - coarse[0]) / 3, (4 * fine[1] - coarse[1]) / 3, (4 * fine[2] - coarse[2]) / 3};
}

// [X, Y](s) = (dY/dx) X - (dX/dx) Y
template <class X, class Y>
Vec3 bracket(const X& x, const Y& y, const AugmentedState& s, double h) {
  return sub(jvp(y, s, x(s), h), jvp(x, s, y(s), h));
}

}  // namespace

double control_hamiltonian(const State& s, const AdjointState& a, double u) {
  require_positive_x1(s.x1);
  const double inv2 = 1.0 / (s.x1 * s.x1);
  return a.lambda0() * 0.5 * (s.x2 * s.x2 + inv2) + a.lambda1() * s.x2 + a.lambda2() * (-u * s.x1 + inv2 / s.x1);
}

std::pair<double, double> adjoint_derivative(const State& s, const AdjointState& a, double u) {
  require_positive_x1(s.x1);
  const double inv = 1.0 / s.x1;
  const double inv3 = inv * inv * inv;
  return {a.lambda0() * inv3 + a.lambda2() * (u + 3.0 * inv3 * inv), -a.lambda0() * s.x2 - a.lambda1()};
}

AdjointState singular_adjoint(const State& s, double lambda0) {
  if (lambda0 == 0.0)
    fail(ErrorCode::MaximumPrinciple, "lambda2 = 0 with lambda0 = 0 forces lambda1 = 0 on a singular arc");
  return AdjointState(lambda0, -lambda0 * s.x2, 0.0);
}

Vec3 augmented_drift(const AugmentedState& s) {
  require_positive_x1(s.x1);
  const double inv = 1.0 / s.x1;
  return {s.x2, inv * inv * inv, s.x2 * s.x2 + inv * inv - s.Ebar};
}

Vec3 augmented_control_field(const AugmentedState& s) { return {0.0, -s.x1, 0.0}; }

double det3(const Vec3& a, const Vec3& b, const Vec3& c) noexcept {
  // columns a, b, c
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) + c[0] * (a[1] * b[2] - a[2] * b[1]);
}

LieDeterminants lie_determinants(const AugmentedState& s) {
  require_positive_x1(s.x1);
  const double x1sq = s.x1 * s.x1;
  return {-2.0 * x1sq * x1sq, 4.0, 1.0 - x1sq * (s.Ebar + s.x2 * s.x2)};
}

LieDeterminants numeric_lie_determinants(const AugmentedState& s, double step) {
  require_positive_x1(s.x1);
  const Field f = &augmented_drift;
  const Field g = &augmented_control_field;
  auto fg = [&](const AugmentedState& p) { return bracket(f, g, p, step); };
  const Vec3 g0 = g(s);
  const Vec3 fg0 = fg(s);
  const Vec3 g_fg = bracket(g, fg, s, step);
  const Vec3 f_fg = bracket(f, fg, s, step);
  return {det3(g0, fg0, g_fg), det3(g0, fg0, f_fg), det3(g0, fg0, f(s))};
}

bool hyperbolic_test(const SingularArc& arc, double Ebar) { return hyperbolicity_margin(arc, Ebar) > 0.0; }

ExtremalRun integrate_extremal(const State& x0, const AdjointState& a0, ControlLaw law, double horizon,
                               double step, std::size_t record_every) {
  if (!(horizon >= 0.0) || !(step > 0.0)) fail(ErrorCode::InvalidArgument, "horizon >= 0 and step > 0 required");
  if (record_every == 0) record_every = 1;
  using Y = std::array<double, 4>;  // x1, x2, lambda1, lambda2
  const double lambda0 = a0.lambda0();
  auto rhs = [&](const Y& y, Y& dy, double) {
    require_positive_x1(y[0]);
    const double u = law(y[0]);
    const State s{y[0], y[1]};
    const auto [dx1, dx2] = state_derivative(s, u);
    const double inv = 1.0 / y[0];
    const double inv3 = inv * inv * inv;
    dy = {dx1, dx2, lambda0 * inv3 + y[3] * (u + 3.0 * inv3 * inv), -lambda0 * y[1] - y[2]};
  };
  auto hamiltonian = [&](const Y& y) {
    const State s{y[0], y[1]};
    const double inv2 = 1.0 / (s.x1 * s.x1);
    return lambda0 * 0.5 * (s.x2 * s.x2 + inv2) + y[2] * s.x2 + y[3] * (-law(s.x1) * s.x1 + inv2 / s.x1);
  };

  ExtremalRun run;
  Y y{x0.x1, x0.x2, a0.lambda1(), a0.lambda2()};
  const double h0 = hamiltonian(y);
  const auto n = static_cast<std::size_t>(std::ceil(horizon / step));
  const double h = n > 0 ? horizon / static_cast<double>(n) : 0.0;
  odeint::runge_kutta4<Y> stepper;
  run.samples.push_back({0.0, x0, y[2], y[3], h0});
  run.max_abs_lambda2 = std::abs(y[3]);
  for (std::size_t k = 1; k <= n; ++k) {
    stepper.do_step(rhs, y, static_cast<double>(k - 1) * h, h);
    const double hk = hamiltonian(y);
    run.max_hamiltonian_drift = std::max(run.max_hamiltonian_drift, std::abs(hk - h0));
    run.max_abs_lambda2 = std::max(run.max_abs_lambda2, std::abs(y[3]));
    if (k % record_every == 0 || k == n) run.samples.push_back({static_cast<double>(k) * h, {y[0], y[1]}, y[2], y[3], hk});
  }
  return run;
}

ConjugateScan conjugate_point_scan(double gamma, double T, std::size_t grid_points) {
  if (grid_points < 2) fail(ErrorCode::InvalidArgument, "conjugate scan needs at least two grid points");
  const UnboundedSynthesis syn = build_protocol(gamma, T);
  const State start = apply_impulse(kInitialState, syn.initial_weight);

  // x1, x2 along S = f + u_s g, then the Jacobi field (dx1, dx2, dx3).
  using Y = std::array<double, 5>;
  auto rhs = [](const Y& y, Y& dy, double) {
    require_positive_x1(y[0]);
    const double inv = 1.0 / y[0];
    const double inv3 = inv * inv * inv;
    dy = {y[1], -inv3, y[3], 3.0 * inv3 * inv * y[2], -2.0 * inv3 * y[2] + 2.0 * y[1] * y[3]};
  };

  ConjugateScan out;
  out.grid_points = grid_points;
  Y y{start.x1, start.x2, 0.0, -1.0, 0.0};
  const double h = T / static_cast<double>(grid_points);
  odeint::runge_kutta4<Y> stepper;
  double prev_dx1 = y[2];
  out.min_negative_dx1 = std::numeric_limits<double>::infinity();
  constexpr double kAlign = 1e-10;
  for (std::size_t k = 1; k <= grid_points; ++k) {
    const double t_prev = static_cast<double>(k - 1) * h;
    stepper.do_step(rhs, y, t_prev, h);
    const double t = static_cast<double>(k) * h;
    const double dx1 = y[2];
    out.min_negative_dx1 = std::min(out.min_negative_dx1, -dx1);
    if (!(dx1 < prev_dx1)) out.dx1_strictly_decreasing = false;
    const bool crossed = (prev_dx1 < 0.0 && dx1 >= 0.0) || std::abs(dx1) < kAlign;
    if (crossed && y[3] != 0.0) {
      // linear interpolation of the zero crossing inside the step
      const double tc = (prev_dx1 < 0.0 && dx1 > 0.0) ? t_prev + h * (-prev_dx1) / (dx1 - prev_dx1) : t;
      if (!out.conjugate_time) out.conjugate_time = tc;
      if (!out.collinear_time && std::abs(y[4]) < kAlign) out.collinear_time = tc;
    }
    prev_dx1 = dx1;
  }
  out.final_variation = {y[2], y[3], y[4]};
  return out;
}

}  // namespace fcool
