#include "fcool/bounded.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fcool/error.hpp"
#include "fcool/quadrature.hpp"

namespace fcool {

namespace {

constexpr double kClamp = 1e-12;
constexpr double kQuadTol = 1e-12;

void check_gamma(double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be > 1");
}

double clamped_acos(double arg) {
  if (arg > 1.0 + kClamp || arg < -1.0 - kClamp) {
    std::ostringstream os;
    os.precision(17);
    os << "acos argument " << arg << " outside [-1, 1]";
    fail(ErrorCode::Inconsistency, os.str());
  }
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double clamped_acosh(double arg) {
  if (arg < 1.0 - kClamp) {
    std::ostringstream os;
    os.precision(17);
    os << "acosh argument " << arg << " below 1";
    fail(ErrorCode::Inconsistency, os.str());
  }
  return std::acosh(std::max(arg, 1.0));
}

// Energy level K of the u = +1 arc through (gamma, 0), and the centre/amplitude
// of x1^2 = A + C cos(2 s) along it, s being the time still to go.
struct SecondArc {
  double K, A, C;
};

SecondArc second_arc(double gamma) {
  const double g2 = gamma * gamma;
  const double K = g2 + 1.0 / g2;
  return {K, 0.5 * K, 0.5 * (g2 - 1.0 / g2)};
}

double joint_square(double gamma) {
  const double g2 = gamma * gamma;
  return (g2 * g2 + 1.0) / (2.0 * g2);
}

}  // namespace

BangBangSolution min_time(double gamma) {
  check_gamma(gamma);
  BangBangSolution out;
  out.gamma = gamma;
  const double y = joint_square(gamma);
  out.x1_joint = std::sqrt(y);
  out.T1 = 0.5 * std::acosh(y);
  out.T2 = std::numbers::pi / 4.0;
  out.T_min = out.T1 + out.T2;
  out.protocol.bang(-1.0, out.T1).bang(1.0, out.T2);
  return out;
}

double first_arc_x2(double x1) {
  if (!(x1 >= 1.0)) fail(ErrorCode::Domain, "first bang arc is defined for x1 >= 1");
  // x1^2 - 1/x1^2 = (x1 - 1/x1)(x1 + 1/x1), exact at x1 = 1
  return std::sqrt((x1 - 1.0 / x1) * (x1 + 1.0 / x1));
}

double second_arc_x2(double gamma, double x1) {
  check_gamma(gamma);
  if (!(x1 >= 1.0 / gamma && x1 <= gamma)) fail(ErrorCode::Domain, "second bang arc is defined for 1/gamma <= x1 <= gamma");
  // K - x1^2 - 1/x1^2 factored so that it vanishes exactly at x1 = gamma
  const double g2 = gamma * gamma, y = x1 * x1;
  return std::sqrt(std::max(0.0, (g2 - y) * (1.0 - 1.0 / (g2 * y))));
}

BangArcs bang_arcs(double gamma) {
  check_gamma(gamma);
  return {[](double x1) { return first_arc_x2(x1); }, [gamma](double x1) { return second_arc_x2(gamma, x1); }};
}

Junctions junctions_from_c(double gamma, double c) {
  check_gamma(gamma);
  if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "arc constant must be finite");
  const double K = second_arc(gamma).K;
  // x1_b^2 solves y^2 - (K - c) y + 2 = 0; the larger root is where the
  // singular arc leaves the region bounded by the u = +1 arc.
  const double disc = (K - c) * (K - c) - 8.0;
  if (disc < 0.0) fail(ErrorCode::Domain, "singular arc does not meet the final bang arc");
  const double ya = 0.5 * (c + std::sqrt(c * c + 8.0));
  const double yb = 0.5 * ((K - c) + std::sqrt(disc));
  if (ya > yb * (1.0 + kClamp)) fail(ErrorCode::Domain, "junction ordering x1_a <= x1_b violated");
  return {std::sqrt(ya), std::sqrt(std::max(ya, yb))};
}

SegmentTimes segment_times(double gamma, double c) {
  const Junctions j = junctions_from_c(gamma, c);
  const double ya = j.x1_a * j.x1_a;
  const double yb = j.x1_b * j.x1_b;
  if (1.0 + c * yb < 0.0) fail(ErrorCode::Domain, "singular arc turns back before the final bang arc");
  const double g2 = gamma * gamma;
  SegmentTimes out;
  out.T1p = 0.5 * clamped_acosh(ya);
  out.T2p = (yb - ya) / (std::sqrt(1.0 + c * yb) + std::sqrt(1.0 + c * ya));
  out.T3p = 0.5 * clamped_acos((2.0 * g2 * yb - g2 * g2 - 1.0) / (g2 * g2 - 1.0));
  return out;
}

double max_arc_constant(double gamma) {
  check_gamma(gamma);
  const double y = joint_square(gamma);
  return y - 2.0 / y;
}

BangSingularBang bang_singular_bang(double gamma, double c) {
  const Junctions j = junctions_from_c(gamma, c);
  const SegmentTimes st = segment_times(gamma, c);
  BangSingularBang out;
  out.gamma = gamma;
  out.c = c;
  out.T1p = st.T1p;
  out.T2p = st.T2p;
  out.T3p = st.T3p;
  out.horizon = st.total();
  out.x1_a = j.x1_a;
  out.x1_b = j.x1_b;
  out.protocol.bang(-1.0, st.T1p).singular(st.T2p).bang(1.0, st.T3p);
  return out;
}

BangSingularBang solve_c(double gamma, double T) {
  check_gamma(gamma);
  if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorCode::InvalidArgument, "horizon must be > 0");
  const double t_min = min_time(gamma).T_min;
  if (T < t_min * (1.0 - kClamp)) {
    std::ostringstream os;
    os.precision(17);
    os << "horizon " << T << " is below the minimum transfer time " << t_min;
    fail(ErrorCode::Infeasible, os.str());
  }
  const double c_max = max_arc_constant(gamma);
  if (!(c_max > 0.0))
    fail(ErrorCode::UnsupportedRegion, "no bang-singular-bang protocol with c > 0 exists for this gamma");

  auto residual = [&](double c) { return segment_times(gamma, c).total() - T; };

  const double r0 = residual(0.0);
  if (r0 < -kClamp * T) {
    std::ostringstream os;
    os.precision(17);
    os << "horizon " << T << " requires a singular arc with c < 0 (c = 0 reaches " << T + r0 << ")";
    fail(ErrorCode::UnsupportedRegion, os.str());
  }
  if (r0 <= 0.0) {
    BangSingularBang out = bang_singular_bang(gamma, 0.0);
    out.horizon = T;
    return out;
  }
  if (T <= t_min) {
    BangSingularBang out = bang_singular_bang(gamma, c_max);
    out.horizon = T;
    return out;
  }

  // Geometric bracketing from c = 1. The total time must fall strictly as c
  // grows; every evaluated point is checked against its neighbours.
  double lo = 0.0, r_lo = r0;
  double hi = c_max, r_hi = residual(c_max);
  double probe = std::min(1.0, 0.5 * c_max);
  double r_probe = residual(probe);
  auto check_order = [](double r_left, double r_right) {
    if (!(r_left > r_right)) fail(ErrorCode::Convergence, "total segment time is not monotone in c");
  };
  check_order(r_lo, r_probe);
  check_order(r_probe, r_hi);
  if (r_probe > 0.0) {
    lo = probe, r_lo = r_probe;
    for (double next = std::min(2.0 * probe, c_max); next < c_max; next = std::min(2.0 * next, c_max)) {
      const double r = residual(next);
      check_order(r_lo, r);
      if (r <= 0.0) {
        hi = next, r_hi = r;
        break;
      }
      lo = next, r_lo = r;
    }
  } else {
    hi = probe, r_hi = r_probe;
    for (double next = 0.5 * probe; next > 1e-14; next *= 0.5) {
      const double r = residual(next);
      check_order(r, r_hi);
      if (r >= 0.0) {
        lo = next, r_lo = r;
        break;
      }
      hi = next, r_hi = r;
    }
  }
  if (r_lo == 0.0 || r_hi == 0.0) {
    BangSingularBang out = bang_singular_bang(gamma, r_lo == 0.0 ? lo : hi);
    out.horizon = T;
    return out;
  }

  boost::uintmax_t max_iter = 300;
  const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, r_lo, r_hi,
                                                       boost::math::tools::eps_tolerance<double>(), max_iter);
  const double c = std::abs(residual(a)) <= std::abs(residual(b)) ? a : b;
  BangSingularBang out = bang_singular_bang(gamma, c);
  if (std::abs(out.horizon - T) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "arc-constant solve missed the horizon: |" << out.horizon << " - " << T << "| > 1e-10";
    fail(ErrorCode::Convergence, os.str());
  }
  out.horizon = T;
  return out;
}

State state_at(const BangSingularBang& s, double t) {
  if (t < 0.0 || t > s.horizon * (1.0 + kClamp)) fail(ErrorCode::InvalidArgument, "t outside [0, horizon]");
  const double t_a = s.T1p;
  const double t_b = s.T1p + s.T2p;
  if (t <= t_a) {
    const double y = std::cosh(2.0 * t);
    const double x1 = std::sqrt(y);
    return {x1, std::sinh(2.0 * t) / x1};
  }
  if (t <= t_b) {
    const double tau = t - t_a;
    const double ya = s.x1_a * s.x1_a;
    const double q = std::sqrt(1.0 + s.c * ya) + s.c * tau;
    const double x1 = std::sqrt(ya + 2.0 * std::sqrt(1.0 + s.c * ya) * tau + s.c * tau * tau);
    return {x1, q / x1};
  }
  const SecondArc arc = second_arc(s.gamma);
  const double to_go = std::max(0.0, s.T1p + s.T2p + s.T3p - t);
  const double x1 = std::sqrt(arc.A + arc.C * std::cos(2.0 * to_go));
  return {x1, arc.C * std::sin(2.0 * to_go) / x1};
}

State state_at(const BangBangSolution& s, double t) {
  if (t < 0.0 || t > s.T_min * (1.0 + kClamp)) fail(ErrorCode::InvalidArgument, "t outside [0, T_min]");
  if (t <= s.T1) {
    const double x1 = std::sqrt(std::cosh(2.0 * t));
    return {x1, std::sinh(2.0 * t) / x1};
  }
  const SecondArc arc = second_arc(s.gamma);
  const double to_go = std::max(0.0, s.T_min - t);
  const double x1 = std::sqrt(arc.A + arc.C * std::cos(2.0 * to_go));
  return {x1, arc.C * std::sin(2.0 * to_go) / x1};
}

BoundedEnergy bounded_energy(double gamma, double T) {
  BoundedEnergy out;
  out.synthesis = solve_c(gamma, T);
  const auto& s = out.synthesis;
  auto integrand = [&](double t) {
    const State x = state_at(s, t);
    return x.x2 * x.x2 + 1.0 / (x.x1 * x.x1);
  };
  const double t_a = s.T1p;
  const double t_b = s.T1p + s.T2p;
  const double t_end = t_b + s.T3p;
  out.first_arc = adaptive_simpson(integrand, 0.0, t_a, kQuadTol);
  out.singular_arc = adaptive_simpson(integrand, t_a, t_b, kQuadTol);
  out.second_arc = adaptive_simpson(integrand, t_b, t_end, kQuadTol);
  out.average_energy = (out.first_arc + out.singular_arc + out.second_arc) / T;
  return out;
}

double bounded_energy_value(double gamma, double T) { return bounded_energy(gamma, T).average_energy; }

bool joint_above_c0_arc(double gamma) {
  check_gamma(gamma);
  const double g4 = gamma * gamma * gamma * gamma;
  return g4 * g4 - 6.0 * g4 + 1.0 > 0.0;
}

}  // namespace fcool
