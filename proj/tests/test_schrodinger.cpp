#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fcool/bounded.hpp"
#include "fcool/error.hpp"
#include "fcool/schrodinger.hpp"
#include "fcool/unbounded.hpp"
#include "fcool/verification.hpp"

using namespace fcool;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(10.0, 1000), Error);
  CHECK_THROWS_AS(Grid(-1.0, 1024), Error);
  const Grid g(10.0, 1024);
  CHECK(g.x(0) == -10.0);
  CHECK(g.dx() == doctest::Approx(20.0 / 1024));
  CHECK_THROWS_AS(check_resolution({20, 1.0}, Grid(10.0, 256)), Error);
  CHECK_THROWS_AS(check_resolution({0, 1.0}, Grid(2.0, 1024)), Error);
}

TEST_CASE("eigenstates") {
  const Grid g(20.0, 1024);
  const GridWavefunction ground = eigenstate({0, 1.0}, g);
  CHECK(ground.norm() == doctest::Approx(1.0).epsilon(1e-10));
  const std::size_t mid = g.points / 2;
  CHECK(std::abs(ground.amplitudes()[mid]) == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-12));
  for (unsigned m = 0; m <= 6; ++m)
    for (unsigned n = m + 1; n <= 6; ++n)
      CHECK(std::abs(overlap(eigenstate({m, 1.0}, g), eigenstate({n, 1.0}, g))) < 1e-8);
  SplitStepper stepper(g);
  CHECK(stepper.energy(eigenstate({2, 1.0}, g), 1.0) == doctest::Approx(2.5).epsilon(1e-8));
  // omega = 0.25 eigenstate carries (n + 1/2) omega.
  CHECK(stepper.energy(eigenstate({1, 0.25}, g), 0.0625) == doctest::Approx(0.375).epsilon(1e-8));
}

TEST_CASE("expanding modes") {
  const Grid g(40.0, 2048);
  for (unsigned n : {0u, 1u, 3u}) {
    CHECK(fidelity(expanding_mode(n, 1.0, 0.0, 0.0, g), eigenstate({n, 1.0}, g)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fidelity(expanding_mode(n, 3.0, 0.0, 0.7, g), eigenstate({n, 1.0 / 9.0}, g)) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
  SplitStepper stepper(g);
  for (unsigned n : {0u, 2u}) {
    const double b = 2.3, bdot = 0.4, u = 0.2;
    const double expected = (2.0 * n + 1.0) / 4.0 * (bdot * bdot + u * b * b + 1.0 / (b * b));
    CHECK(stepper.energy(expanding_mode(n, b, bdot, 0.0, g), u) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("populations") {
  const Grid g(20.0, 1024);
  const auto p = populations(eigenstate({1, 1.0}, g), 1.0, 6);
  REQUIRE(p.size() == 7);
  for (unsigned n = 0; n <= 6; ++n) CHECK(p[n] == doctest::Approx(n == 1 ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
  // A displaced Gaussian spreads over levels; Bessel inequality holds.
  GridWavefunction shifted = eigenstate({0, 1.0}, g);
  for (std::size_t j = 0; j < g.points; ++j)
    shifted.amplitudes()[j] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * std::pow(g.x(j) - 1.0, 2));
  double sum = 0.0;
  for (double v : populations(shifted, 1.0, 12)) sum += v;
  CHECK(sum <= 1.0 + 1e-8);
  CHECK(sum > 0.99);
}

TEST_CASE("stationary state under the initial trap") {
  const Grid g(20.0, 512);
  const GridWavefunction psi = eigenstate({0, 1.0}, g);
  Protocol hold;
  hold.bang(1.0, 5.0);
  PropagationConfig cfg;
  cfg.steps = 5000;
  const PropagationResult r = propagate(psi, CoolingProblem(2.0, 5.0), hold, cfg);
  CHECK(std::abs(overlap(psi, r.psi)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.max_norm_drift < 1e-10);
}

TEST_CASE("exact kick") {
  const Grid g(20.0, 512);
  SplitStepper stepper(g);
  GridWavefunction psi = eigenstate({0, 1.0}, g);
  stepper.kick(psi, -0.5);
  // Kick of weight w imprints momentum -w x: same as an expanding mode with b = 1, bdot = -w.
  CHECK(fidelity(psi, expanding_mode(0, 1.0, 0.5, 0.0, g)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("small bang-bang run") {
  SchrodingerOptions o;
  o.gamma = 2.0;
  o.points = 1024;
  o.steps = 20000;
  const SchrodingerRun run = run_schrodinger(o);
  CHECK(run.final_fidelity >= 0.999);
  CHECK(run.min_mode_fidelity >= 0.9999);
  CHECK(run.max_norm_drift < 1e-9);
  CHECK(run.max_energy_error < 1e-4);
  CHECK(schrodinger_suite(run).passed());
}

TEST_CASE("discretization convergence") {
  SchrodingerOptions coarse;
  coarse.gamma = 2.0;
  coarse.points = 1024;
  coarse.steps = 20000;
  SchrodingerOptions fine = coarse;
  fine.points = 2048;
  fine.steps = 40000;
  const double a = run_schrodinger(coarse).final_fidelity;
  const double b = run_schrodinger(fine).final_fidelity;
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("excited level through the bounded protocol") {
  SchrodingerOptions o;
  o.gamma = 2.0;
  o.level = 1;
  o.points = 1024;
  o.steps = 40000;
  o.protocol = SchrodingerProtocol::BangSingularBang;
  o.horizon = 0.5 * (min_time(2.0).T_min + segment_times(2.0, 0.0).total());
  const SchrodingerRun run = run_schrodinger(o);
  REQUIRE(run.final_populations.size() > 1);
  CHECK(run.final_populations[1] >= 0.998);
}

TEST_CASE("impulse protocols") {
  SchrodingerOptions o;
  o.gamma = 2.0;
  o.points = 1024;
  o.steps = 20000;
  o.protocol = SchrodingerProtocol::Unbounded;
  o.horizon = free_time_optimum(2.0).horizon;
  const SchrodingerRun exact = run_schrodinger(o);
  CHECK(exact.final_fidelity >= 0.999);
  o.impulse_mode = ImpulseMode::RectangularPulse;
  const SchrodingerRun pulse = run_schrodinger(o);
  CHECK(pulse.final_fidelity < exact.final_fidelity);
  CHECK(pulse.final_fidelity > 0.99);
}

TEST_CASE("grid too small for the expansion") {
  SchrodingerOptions o;
  o.gamma = 3.0;
  o.points = 1024;
  o.half_width = 10.0;
  o.steps = 1000;
  try {
    run_schrodinger(o);
    FAIL("undersized grid accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Resolution);
  }
}
