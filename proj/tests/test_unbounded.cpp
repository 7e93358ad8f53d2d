#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fcool/error.hpp"
#include "fcool/unbounded.hpp"
#include "oracles.hpp"

using namespace fcool;

TEST_CASE("singular arc endpoints and midpoint") {
  for (double T : {0.5, 4.0, 49.5, 120.0}) {
    CHECK(singular_x1(0.0, 10.0, T) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(singular_x1(T, 10.0, T) == doctest::Approx(10.0).epsilon(1e-13));
  }
  CHECK(singular_x1(24.75, 10.0, 49.5) == doctest::Approx(std::sqrt(50.5)).epsilon(1e-14));
}

TEST_CASE("singular arc against RK4 under the feedback law") {
  const double gamma = 10.0, T = 49.5;
  const double B = std::hypot(gamma, T) - 1.0;
  auto rhs = [](double, const oracle::Vec<2>& y) {
    const double u = 2.0 / std::pow(y[0], 4);
    return oracle::Vec<2>{y[1], -u * y[0] + 1.0 / (y[0] * y[0] * y[0])};
  };
  const auto mid = oracle::rk4<2>(rhs, {1.0, B / T}, 0.0, T / 2, 200000);
  CHECK(mid[0] == doctest::Approx(std::sqrt(50.5)).epsilon(1e-9));
  CHECK(mid[1] == doctest::Approx(singular_x2(T / 2, gamma, T)).epsilon(1e-9));
  const oracle::UnboundedArc arc(gamma, T);
  for (double t : {0.3, 7.0, 31.0}) {
    CHECK(singular_x1(t, gamma, T) == doctest::Approx(arc.x1(t)).epsilon(1e-12));
    CHECK(singular_x2(t, gamma, T) == doctest::Approx(arc.x2(t)).epsilon(1e-12));
  }
}

TEST_CASE("arc constant") {
  CHECK(std::abs(arc_constant(10.0, 49.5).c) < 1e-15);
  const double turning = turning_horizon(10.0);
  CHECK(turning == doctest::Approx(10.0 * std::sqrt(99.0)));
  CHECK(arc_constant(10.0, turning).c == doctest::Approx(-0.01).epsilon(1e-12));
  const double far = arc_constant(10.0, 1e6).c;
  CHECK(far < 0.0);
  CHECK(far > -1e-4);
  // Bounded below by -1/gamma^2.
  for (double T : {1.0, 50.0, 99.0, 200.0, 1e4}) CHECK(arc_constant(10.0, T).c >= -0.01 - 1e-15);
  // c grows without bound as T shrinks.
  CHECK(arc_constant(10.0, 1e-3).c > 1e6);
  // Independent forms agree.
  CHECK(arc_constant(3.0, 2.0).c == doctest::Approx(oracle::UnboundedArc(3.0, 2.0).c()).epsilon(1e-13));
}

TEST_CASE("terminal velocity") {
  CHECK(terminal_velocity(10.0, 49.5) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(std::abs(terminal_velocity(10.0, turning_horizon(10.0))) < 1e-14);
  const double v = terminal_velocity(10.0, 120.0);
  CHECK(v < 0.0);
  CHECK(v == doctest::Approx((100.0 - std::sqrt(14500.0)) / 1200.0).epsilon(1e-13));
  // Matches dx1/dt of the arc at t = T.
  CHECK(terminal_velocity(10.0, 15.0) == doctest::Approx(oracle::UnboundedArc(10.0, 15.0).x2(15.0)).epsilon(1e-12));
}

TEST_CASE("protocol construction") {
  const UnboundedSynthesis s = build_protocol(10.0, 49.5);
  CHECK(s.initial_weight == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(s.final_weight > 0.0);
  REQUIRE(s.protocol.segments().size() == 3);
  CHECK(std::holds_alternative<Impulse>(s.protocol.segments()[0]));
  CHECK(std::holds_alternative<Singular>(s.protocol.segments()[1]));
  CHECK(std::holds_alternative<Impulse>(s.protocol.segments()[2]));
  CHECK(build_protocol(10.0, 120.0).final_weight < 0.0);
  // Impulses close the transfer exactly.
  for (double T : {2.0, 49.5, 120.0}) {
    const UnboundedSynthesis u = build_protocol(10.0, T);
    const State end = apply_impulse({10.0, u.terminal_velocity}, u.final_weight);
    CHECK(std::abs(end.x2) < 1e-15);
    CHECK(apply_impulse(kInitialState, u.initial_weight).x2 == doctest::Approx(singular_x2(0.0, 10.0, T)));
  }
  CHECK_THROWS_AS(build_protocol(10.0, 0.0), Error);
  CHECK_THROWS_AS(build_protocol(1.0, 5.0), Error);
}

TEST_CASE("average energy") {
  const double expected = 99.0 * std::log(10.0) / 2450.25;
  CHECK(average_energy(10.0, 49.5) == doctest::Approx(expected).epsilon(1e-14));
  // Quadrature oracle along the closed-form arc.
  for (double T : {4.0, 49.5, 120.0}) {
    const oracle::UnboundedArc arc(10.0, T);
    const double I = oracle::simpson([&](double t) { return std::pow(arc.x2(t), 2) + 1.0 / std::pow(arc.x1(t), 2); },
                                     0.0, T, 200000);
    CHECK(average_energy(10.0, T) == doctest::Approx(I / T).epsilon(1e-10));
  }
  double prev = average_energy(10.0, 0.1);
  for (double T = 0.2; T < 1000.0; T *= 1.1) {
    const double e = average_energy(10.0, T);
    CHECK(e < prev);
    prev = e;
  }
  for (double T : {0.5, 5.0, 50.0, 500.0})
    CHECK(average_energy(10.0, T) + arc_constant(10.0, T).c ==
          doctest::Approx(2.0 * appendix_f(10.0, T) / (T * T)).epsilon(1e-10));
}

TEST_CASE("energy slope") {
  for (double T : {0.7, 3.0, 49.5, 300.0}) {
    const double h = 1e-4 * T;
    const double fd = (average_energy(10.0, T + h) - average_energy(10.0, T - h)) / (2 * h);
    CHECK(average_energy_slope(10.0, T) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(average_energy_slope(10.0, T) < 0.0);
  }
}

TEST_CASE("free-time optimum") {
  CHECK(free_time_optimum(10.0).horizon == doctest::Approx(49.5));
  CHECK(free_time_optimum(2.0).horizon == doctest::Approx(1.5));
  CHECK(std::abs(free_time_optimum(10.0).c) < 1e-15);
  // J = E T / 2 is minimal at T* on a grid around it.
  const double t_star = 49.5;
  const double j_star = average_energy(10.0, t_star) * t_star / 2.0;
  for (double T = 40.0; T <= 60.0; T += 0.25)
    if (std::abs(T - t_star) > 1e-12) CHECK(average_energy(10.0, T) * T / 2.0 > j_star);
  CHECK_THROWS_AS(free_time_optimum(1.0), Error);
}

TEST_CASE("monotonicity helpers") {
  for (double g : {1.5, 3.0, 10.0}) {
    CHECK(appendix_f(g, 0.0) == doctest::Approx((g - 1) * (g - 1)));
    CHECK(appendix_g(g, 0.0) == doctest::Approx(0.0));
  }
  for (double T : {1.0, 10.0, 100.0}) {
    const double h = 1e-3 * T;
    const double fd = (appendix_g(10.0, T + h) - appendix_g(10.0, T - h)) / (2 * h);
    const double exact = T * T * std::pow(100.0 + T * T, -1.5);
    CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
    const double fg = (appendix_f(10.0, T + h) - appendix_f(10.0, T - h)) / (2 * h);
    CHECK(fg == doctest::Approx(appendix_g(10.0, T)).epsilon(1e-6));
    CHECK(appendix_f(10.0, T) > 0.0);
  }
}
