#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fcool/error.hpp"
#include "fcool/pmp.hpp"
#include "fcool/unbounded.hpp"
#include "oracles.hpp"

using namespace fcool;

TEST_CASE("control Hamiltonian on the singular arc") {
  for (const State s : {State{1.0, 1.0}, State{3.0, -0.2}, State{7.1, 0.14}}) {
    const AdjointState a = singular_adjoint(s);
    CHECK(a.lambda0() == -1.0);
    CHECK(a.lambda1() == s.x2);
    CHECK(a.lambda2() == 0.0);
    for (double u : {-1.0, 0.3, 5.0})
      CHECK(control_hamiltonian(s, a, u) == doctest::Approx(0.5 * (s.x2 * s.x2 - 1.0 / (s.x1 * s.x1))));
  }
  try {
    singular_adjoint({2.0, 1.0}, 0.0);
    FAIL("lambda0 = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaximumPrinciple);
  }
}

TEST_CASE("adjoint equations") {
  const State s{2.0, 0.7};
  const AdjointState a = singular_adjoint(s);
  const auto [d1, d2] = adjoint_derivative(s, a, singular_feedback(s.x1));
  CHECK(d1 == doctest::Approx(-1.0 / 8.0));
  CHECK(d2 == doctest::Approx(0.0).scale(1.0));
  CHECK(switching_function(AdjointState(-1.0, 0.0, -3.0)) == 3.0);
  // Against finite differences of H.
  const AdjointState b(-1.0, 0.4, -0.9);
  const double u = 0.6, h = 1e-6;
  const double dHdx1 =
      (control_hamiltonian({s.x1 + h, s.x2}, b, u) - control_hamiltonian({s.x1 - h, s.x2}, b, u)) / (2 * h);
  const double dHdx2 =
      (control_hamiltonian({s.x1, s.x2 + h}, b, u) - control_hamiltonian({s.x1, s.x2 - h}, b, u)) / (2 * h);
  const auto [e1, e2] = adjoint_derivative(s, b, u);
  CHECK(e1 == doctest::Approx(-dHdx1).epsilon(1e-8));
  CHECK(e2 == doctest::Approx(-dHdx2).epsilon(1e-8));
}

TEST_CASE("Lie determinants") {
  const LieDeterminants d = lie_determinants({1.0, 0.0, 0.0, 1.0});
  CHECK(d.D == -2.0);
  CHECK(d.Dprime == 4.0);
  CHECK(d.Dsecond == 0.0);
  CHECK(lie_determinants({2.0, 0.3, 0.0, 1.0}).singular_control() == doctest::Approx(0.125));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux1(0.5, 20.0), ux2(-5.0, 5.0), uE(1e-3, 5.0);
  for (int i = 0; i < 100; ++i) {
    const AugmentedState s{ux1(rng), ux2(rng), 0.0, uE(rng)};
    const LieDeterminants closed = lie_determinants(s);
    const LieDeterminants lib = numeric_lie_determinants(s);
    const oracle::Determinants ref = oracle::bracket_determinants(s.x1, s.x2, s.Ebar);
    CHECK(oracle::rel(ref.D, closed.D) < 1e-5);
    CHECK(oracle::rel(ref.Dprime, closed.Dprime) < 1e-5);
    CHECK(oracle::rel(ref.Dsecond, closed.Dsecond) < 1e-5);
    CHECK(oracle::rel(lib.D, closed.D) < 1e-5);
    CHECK(oracle::rel(lib.Dprime, closed.Dprime) < 1e-5);
    CHECK(oracle::rel(lib.Dsecond, closed.Dsecond) < 1e-5);
  }
}

TEST_CASE("hyperbolicity") {
  const double e = average_energy(10.0, 49.5);
  CHECK(hyperbolic_test(arc_constant(10.0, 49.5), e));
  const double turning = turning_horizon(10.0);
  CHECK(hyperbolicity_margin(arc_constant(10.0, turning), average_energy(10.0, turning)) > 0.0);
  for (double T = 0.5; T < 500.0; T *= 1.3) {
    const double margin = hyperbolicity_margin(arc_constant(10.0, T), average_energy(10.0, T));
    CHECK(margin - 2.0 * appendix_f(10.0, T) / (T * T) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Hamiltonian drift along extremals") {
  const UnboundedSynthesis syn = build_protocol(10.0, 49.5);
  const State x0{1.0, singular_x2(0.0, 10.0, 49.5)};
  const ExtremalRun run = integrate_extremal(x0, singular_adjoint(x0), ControlLaw::singular(), 10.0);
  CHECK(run.max_hamiltonian_drift < 1e-8);
  CHECK(run.max_abs_lambda2 < 1e-8);
  // A bang extremal with a generic costate also conserves H.
  const ExtremalRun bang =
      integrate_extremal({1.0, 0.0}, AdjointState(-1.0, 0.3, -0.5), ControlLaw::constant(-1.0), 1.0, 1e-4, 10);
  CHECK(bang.max_hamiltonian_drift < 1e-8);
  (void)syn;
}

TEST_CASE("conjugate point scan") {
  for (double gamma : {2.0, 10.0})
    for (double T : {5.0, 49.5, 120.0}) {
      const ConjugateScan scan = conjugate_point_scan(gamma, T);
      CHECK_FALSE(scan.conjugate_time.has_value());
      CHECK_FALSE(scan.collinear_time.has_value());
      CHECK(scan.dx1_strictly_decreasing);
      CHECK(scan.min_negative_dx1 > 0.0);
      CHECK(scan.grid_points == 10000);
    }
  // Oracle: integrate the variational system along the closed-form arc.
  const oracle::UnboundedArc arc(10.0, 49.5);
  auto rhs = [&](double t, const oracle::Vec<3>& d) {
    const double x1 = arc.x1(t), x2 = arc.x2(t);
    return oracle::Vec<3>{d[1], 3.0 * d[0] / std::pow(x1, 4), -2.0 * d[0] / std::pow(x1, 3) + 2.0 * x2 * d[1]};
  };
  oracle::Vec<3> d{0.0, -1.0, 0.0};
  double t = 0.0;
  const double dt = 49.5 / 1000.0;
  for (int i = 0; i < 1000; ++i) {
    d = oracle::rk4<3>(rhs, d, t, t + dt, 20);
    t += dt;
    CHECK(d[0] < 0.0);
  }
  const ConjugateScan scan = conjugate_point_scan(10.0, 49.5);
  CHECK(scan.final_variation[0] == doctest::Approx(d[0]).epsilon(1e-7));
  CHECK(scan.final_variation[2] == doctest::Approx(d[2]).epsilon(1e-7));
}
