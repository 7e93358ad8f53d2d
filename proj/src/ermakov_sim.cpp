#include "fcool/ermakov_sim.hpp"

#include <array>
#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <cmath>
#include <sstream>
#include <variant>

#include "fcool/error.hpp"

namespace fcool {

namespace odeint = boost::numeric::odeint;

namespace {

using Y = std::array<double, 4>;  // x1, x2, J, phase

void check_escape(const Y& y, double t) {
  if (!(y[0] > kEscapeX1)) {
    std::ostringstream os;
    os << "trajectory escaped the validity region at t = " << t << " (x1 = " << y[0] << ")";
    fail(ErrorCode::Domain, os.str());
  }
}

struct Rhs {
  const ControlSegment* segment;
  void operator()(const Y& y, Y& dy, double) const {
    const State s{y[0], y[1]};
    const double u = control_value(*segment, s);
    const auto [dx1, dx2] = state_derivative(s, u);
    const double inv2 = 1.0 / (s.x1 * s.x1);
    dy = {dx1, dx2, 0.5 * (s.x2 * s.x2 + inv2), inv2};
  }
};

double initial_control(const Protocol& protocol) {
  for (const auto& seg : protocol.segments())
    if (!std::holds_alternative<Impulse>(seg)) return control_value(seg, kInitialState);
  return 1.0;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (method == IntegratorMethod::RK4 && !(step >= 0.0)) fail(ErrorCode::InvalidArgument, "RK4 step must be > 0");
  if (method == IntegratorMethod::RK45 && !(tolerance > 0.0 && tolerance <= 1e-3))
    fail(ErrorCode::InvalidArgument, "RK45 tolerance must lie in (0, 1e-3]");
  if (max_steps == 0) fail(ErrorCode::InvalidArgument, "max_steps must be positive");
}

double IntegratorConfig::resolved_step(double horizon) const noexcept {
  if (step > 0.0) return step;
  return horizon > 0.0 ? std::min(1e-4, horizon / 1e5) : 1e-4;
}

Trajectory simulate(const CoolingProblem& problem, const Protocol& protocol, const IntegratorConfig& cfg) {
  cfg.validate();
  protocol.check_matches(problem);
  const double horizon = problem.horizon().value_or(protocol.total_duration());
  const std::vector<double> ends = protocol.end_times(problem.horizon());
  const double h_nominal = cfg.resolved_step(horizon);
  const std::size_t stride = std::max<std::size_t>(1, cfg.record_every);

  Trajectory traj;
  traj.horizon = horizon;
  Y y{kInitialState.x1, kInitialState.x2, 0.0, 0.0};
  traj.samples.push_back({0.0, kInitialState, initial_control(protocol), 0.0, 0.0, 0});

  std::size_t steps = 0;
  auto count_step = [&] {
    if (++steps > cfg.max_steps) fail(ErrorCode::Convergence, "integrator exceeded max_steps");
  };

  double t = 0.0;
  for (std::size_t i = 0; i < protocol.segments().size(); ++i) {
    const ControlSegment& seg = protocol.segments()[i];
    if (const auto* imp = std::get_if<Impulse>(&seg)) {
      const State before{y[0], y[1]};
      const State after = apply_impulse(before, imp->weight);
      y[1] = after.x2;
      traj.impulses.push_back({t, i, before, after});
      Sample& last = traj.samples.back();
      last.state = after;
      last.segment = i;
      continue;
    }
    const double t_end = ends[i];
    const double duration = t_end - t;
    if (duration <= 0.0) continue;
    Rhs rhs{&seg};
    auto record = [&](double tk) {
      const State s{y[0], y[1]};
      traj.samples.push_back({tk, s, control_value(seg, s), y[2], y[3], i});
    };

    if (cfg.method == IntegratorMethod::RK4) {
      const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(duration / h_nominal - 1e-9)));
      const double h = duration / static_cast<double>(n);
      odeint::runge_kutta4<Y> stepper;
      const double t0 = t;
      for (std::size_t k = 1; k <= n; ++k) {
        count_step();
        stepper.do_step(rhs, y, t0 + static_cast<double>(k - 1) * h, h);
        const double tk = (k == n) ? t_end : t0 + static_cast<double>(k) * h;
        check_escape(y, tk);
        if (k % stride == 0 || k == n) record(tk);
      }
    } else {
      auto stepper = odeint::make_controlled(cfg.tolerance, cfg.tolerance, odeint::runge_kutta_dopri5<Y>());
      double tc = t;
      double dt = std::min(duration, 1e-3);
      std::size_t accepted = 0;
      while (tc < t_end) {
        if (tc + dt > t_end) dt = t_end - tc;
        count_step();
        if (stepper.try_step(rhs, y, tc, dt) == odeint::success) {
          if (t_end - tc <= 1e-14 * std::max(1.0, t_end)) tc = t_end;
          check_escape(y, tc);
          ++accepted;
          const bool last = tc >= t_end;
          if (accepted % stride == 0 || last) record(last ? t_end : tc);
        }
      }
    }
    t = t_end;
  }

  traj.cost_J = y[2];
  return traj;
}

double ermakov_residual(const Trajectory& traj, const Protocol& protocol) {
  const auto& s = traj.samples;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const std::size_t seg = s[i].segment;
    if (s[i - 1].segment != seg || s[i + 1].segment != seg) continue;
    if (seg >= protocol.segments().size() || std::holds_alternative<Impulse>(protocol.segments()[seg])) continue;
    const double accel = (s[i + 1].state.x2 - s[i - 1].state.x2) / (s[i + 1].t - s[i - 1].t);
    const double x1 = s[i].state.x1;
    const double u = control_value(protocol.segments()[seg], s[i].state);
    worst = std::max(worst, std::abs(accel + u * x1 - 1.0 / (x1 * x1 * x1)));
  }
  return worst;
}

double BoundaryReport::max_enforced() const noexcept {
  return std::max({initial_position, initial_velocity, final_position, final_velocity});
}

BoundaryReport boundary_check(const Trajectory& traj, double gamma) {
  if (traj.samples.empty()) fail(ErrorCode::InvalidArgument, "empty trajectory");
  const Sample& first = traj.samples.front();
  const Sample& last = traj.samples.back();
  BoundaryReport r;
  // An impulse at t = 0 overwrites the first sample; the boundary values are
  // the pre-impulse ones.
  State start = first.state;
  if (!traj.impulses.empty() && traj.impulses.front().t == 0.0) start = traj.impulses.front().before;
  r.initial_position = std::abs(start.x1 - 1.0);
  r.initial_velocity = std::abs(start.x2);
  r.final_position = std::abs(last.state.x1 - gamma);
  r.final_velocity = std::abs(last.state.x2);
  r.initial_control = first.u;
  r.final_control = last.u;
  return r;
}

}  // namespace fcool
