#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fcool/bounded.hpp"
#include "fcool/ermakov_sim.hpp"
#include "fcool/error.hpp"
#include "fcool/unbounded.hpp"
#include "oracles.hpp"

using namespace fcool;

TEST_CASE("unbounded protocol simulation") {
  const UnboundedSynthesis syn = build_protocol(10.0, 49.5);
  const Trajectory t = simulate(CoolingProblem(10.0, 49.5), syn.protocol);
  CHECK(std::abs(t.final_sample().state.x1 - 10.0) < 1e-8);
  CHECK(std::abs(t.final_sample().state.x2) < 1e-8);
  CHECK(t.cost_J == doctest::Approx(syn.average_energy * 49.5 / 2.0).epsilon(1e-6));
  REQUIRE(t.impulses.size() == 2);
  CHECK(t.impulses[0].t == 0.0);
  CHECK(t.impulses[0].before == kInitialState);
  CHECK(t.impulses[1].before.x2 == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(t.final_sample().t == 49.5);
  // Phase integral of 1/x1^2 against quadrature.
  const oracle::UnboundedArc arc(10.0, 49.5);
  const double phase = oracle::simpson([&](double s) { return 1.0 / std::pow(arc.x1(s), 2); }, 0.0, 49.5, 100000);
  CHECK(t.final_sample().phase == doctest::Approx(phase).epsilon(1e-9));
  // Cost against an independent RK4 on the closed loop.
  auto rhs = [](double, const oracle::Vec<3>& y) { return oracle::ermakov(y[0], y[1], 2.0 / std::pow(y[0], 4)); };
  const auto ref = oracle::rk4<3>(rhs, {1.0, 1.0, 0.0}, 0.0, 49.5, 100000);
  CHECK(t.cost_J == doctest::Approx(ref[2]).epsilon(1e-9));
}

TEST_CASE("bang-bang simulation") {
  const BangBangSolution bb = min_time(10.0);
  const Trajectory t = simulate(CoolingProblem(10.0, bb.T_min, BoundMode::SymmetricUnit), bb.protocol);
  CHECK(std::hypot(t.final_sample().state.x1 - 10.0, t.final_sample().state.x2) < 1e-6);
  CHECK(ermakov_residual(t, bb.protocol) < 1e-5);
}

TEST_CASE("adaptive integration") {
  const BangBangSolution bb = min_time(10.0);
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::RK45;
  cfg.tolerance = 1e-12;
  const Trajectory t = simulate(CoolingProblem(10.0, bb.T_min, BoundMode::SymmetricUnit), bb.protocol, cfg);
  CHECK(std::hypot(t.final_sample().state.x1 - 10.0, t.final_sample().state.x2) < 1e-6);
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("empty and stationary protocols") {
  const Trajectory empty = simulate(CoolingProblem(10.0), Protocol{});
  REQUIRE(empty.samples.size() == 1);
  CHECK(empty.samples[0].state == kInitialState);
  CHECK(empty.cost_J == 0.0);

  Protocol hold;
  hold.bang(1.0, 5.0);
  const Trajectory t = simulate(CoolingProblem(2.0, 5.0), hold);
  CHECK(ermakov_residual(t, hold) < 1e-8);
  for (const Sample& s : t.samples) {
    CHECK(s.state.x1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.state.x2) < 1e-12);
  }
}

TEST_CASE("singular residual") {
  const UnboundedSynthesis syn = build_protocol(10.0, 49.5);
  IntegratorConfig cfg;
  cfg.step = 1e-4;
  const Trajectory t = simulate(CoolingProblem(10.0, 49.5), syn.protocol, cfg);
  CHECK(ermakov_residual(t, syn.protocol) < 1e-5);
}

TEST_CASE("escape is reported") {
  Protocol p;
  p.impulse(20.0).bang(1.0, 5.0);
  IntegratorConfig coarse;
  coarse.step = 0.5;  // first stage lands at x1 < 0
  try {
    simulate(CoolingProblem(10.0, 5.0), p, coarse);
    FAIL("escape not reported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("protocol must match the horizon") {
  CHECK_THROWS_AS(simulate(CoolingProblem(10.0, 10.0), build_protocol(10.0, 49.5).protocol), Error);
}

TEST_CASE("boundary report") {
  const UnboundedSynthesis syn = build_protocol(10.0, 15.0);
  const BoundaryReport ok = boundary_check(simulate(CoolingProblem(10.0, 15.0), syn.protocol), 10.0);
  CHECK(ok.max_enforced() < 1e-6);
  CHECK(ok.initial_position == 0.0);
  CHECK(ok.initial_velocity == 0.0);
  CHECK(ok.control_conditions == "relaxed-problem: not enforced");

  Protocol hold;
  hold.bang(1.0, 3.0);
  const BoundaryReport stay = boundary_check(simulate(CoolingProblem(2.0, 3.0), hold), 1.0);
  CHECK(stay.max_enforced() < 1e-12);

  Protocol truncated;
  truncated.impulse(syn.initial_weight).singular(10.0);
  BoundaryReport cut;
  CHECK_NOTHROW(cut = boundary_check(simulate(CoolingProblem(10.0, 10.0), truncated), 10.0));
  CHECK(cut.final_position > 1e-3);
  CHECK(cut.final_velocity > 1e-3);
}

TEST_CASE("fourth-order convergence") {
  const BangBangSolution bb = min_time(10.0);
  const CoolingProblem prob(10.0, bb.T_min, BoundMode::SymmetricUnit);
  auto err = [&](double h) {
    IntegratorConfig cfg;
    cfg.step = h;
    const State e = simulate(prob, bb.protocol, cfg).final_sample().state;
    return std::hypot(e.x1 - 10.0, e.x2);
  };
  const double ratio = err(2e-2) / err(1e-2);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}
