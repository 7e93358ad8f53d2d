#include "fcool/verification.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <random>
#include <sstream>

#include "fcool/bounded.hpp"
#include "fcool/error.hpp"
#include "fcool/pmp.hpp"
#include "fcool/unbounded.hpp"

namespace fcool {

using nlohmann::json;

namespace {

CheckResult at_most(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

CheckResult at_least(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value >= threshold, value, threshold, std::move(detail)};
}

CheckResult holds(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

// Runs a check body and turns library errors into a failed check.
template <class F>
void guarded(SuiteReport& suite, const std::string& name, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    suite.checks.push_back({name, false, 0.0, 0.0, e.what()});
  }
}

}  // namespace

bool SuiteReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

bool all_passed(const std::vector<SuiteReport>& suites) noexcept {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.passed(); });
}

SuiteReport unbounded_suite(double gamma, const IntegratorConfig& cfg) {
  SuiteReport suite{"unbounded-synthesis", {}};
  guarded(suite, "simulation", [&] {
    const double T = free_time_optimum(gamma).horizon;
    const UnboundedSynthesis syn = build_protocol(gamma, T);
    const Trajectory traj = simulate(CoolingProblem(gamma, T), syn.protocol, cfg);
    const State end = traj.final_sample().state;
    suite.checks.push_back(at_most("final_state_error", std::max(std::abs(end.x1 - gamma), std::abs(end.x2)), 1e-8));
    suite.checks.push_back(at_most("cost_vs_closed_form", rel_err(traj.cost_J, syn.average_energy * T / 2.0), 1e-6));
    suite.checks.push_back(at_most("arc_constant_at_optimum", std::abs(syn.arc.c), 1e-12));
  });
  guarded(suite, "arc_invariant", [&] {
    double worst = 0.0;
    for (double T : {0.5 * free_time_optimum(gamma).horizon, free_time_optimum(gamma).horizon, 1.2 * turning_horizon(gamma)}) {
      const double c = arc_constant(gamma, T).c;
      for (int i = 0; i <= 1000; ++i) {
        const double t = T * i / 1000.0;
        const double x1 = singular_x1(t, gamma, T), x2 = singular_x2(t, gamma, T);
        worst = std::max(worst, std::abs(x2 * x2 - 1.0 / (x1 * x1) - c));
      }
    }
    suite.checks.push_back(at_most("arc_invariant_drift", worst, 1e-9));
  });
  guarded(suite, "terminal_velocity", [&] {
    const double Tt = turning_horizon(gamma);
    suite.checks.push_back(holds("terminal_velocity_sign",
                                 terminal_velocity(gamma, 0.5 * Tt) > 0.0 && terminal_velocity(gamma, 1.5 * Tt) < 0.0));
  });
  guarded(suite, "energy_curve", [&] {
    const auto grid = log_grid(0.5, 500.0, 200);
    bool decreasing = true;
    double slope_err = 0.0, identity_err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double T = grid[i];
      if (i > 0 && !(average_energy(gamma, T) < average_energy(gamma, grid[i - 1]))) decreasing = false;
      const double h = 1e-4 * T;
      const double fd = (average_energy(gamma, T + h) - average_energy(gamma, T - h)) / (2 * h);
      slope_err = std::max(slope_err, rel_err(fd, average_energy_slope(gamma, T)));
      identity_err = std::max(identity_err, std::abs(average_energy(gamma, T) + arc_constant(gamma, T).c -
                                                     2.0 * appendix_f(gamma, T) / (T * T)));
    }
    suite.checks.push_back(holds("energy_strictly_decreasing", decreasing));
    suite.checks.push_back(at_most("energy_slope_vs_central_difference", slope_err, 1e-4));
    suite.checks.push_back(at_most("hyperbolicity_identity", identity_err, 1e-9));
  });
  return suite;
}

SuiteReport bounded_suite(double gamma, const IntegratorConfig& cfg) {
  SuiteReport suite{"bounded-synthesis", {}};
  guarded(suite, "min_time", [&] {
    const BangBangSolution bb = min_time(gamma);
    IntegratorConfig fine = cfg;
    if (fine.method == IntegratorMethod::RK4 && fine.step <= 0.0) fine.step = 1e-5;
    const Trajectory traj = simulate(CoolingProblem(gamma, bb.T_min, BoundMode::SymmetricUnit), bb.protocol, fine);
    const State end = traj.final_sample().state;
    suite.checks.push_back(at_most("bang_bang_final_error", std::max(std::abs(end.x1 - gamma), std::abs(end.x2)), 1e-6));
    suite.checks.push_back(at_most("second_arc_is_quarter_period", std::abs(bb.T2 - std::acos(0.0) / 2.0), 1e-15));
  });
  if (!joint_above_c0_arc(gamma)) {
    suite.checks.push_back(holds("bang_singular_bang_available", false,
                                 "gamma below the threshold gamma^8 - 6 gamma^4 + 1 > 0; no c > 0 arcs"));
    return suite;
  }
  guarded(suite, "round_trip", [&] {
    const double c_max = max_arc_constant(gamma);
    double worst_c = 0.0, worst_state = 0.0, worst_u = 0.0;
    for (double c : {0.05, 0.5, 2.0, 10.0}) {
      if (c >= c_max) continue;
      const double T = segment_times(gamma, c).total();
      const BangSingularBang sol = solve_c(gamma, T);
      worst_c = std::max(worst_c, rel_err(sol.c, c));
      const Trajectory traj = simulate(CoolingProblem(gamma, T, BoundMode::SymmetricUnit), sol.protocol, cfg);
      const State end = traj.final_sample().state;
      worst_state = std::max({worst_state, std::abs(end.x1 - gamma), std::abs(end.x2)});
      for (const auto& s : traj.samples)
        if (s.segment == 1) worst_u = std::max(worst_u, s.u);
    }
    suite.checks.push_back(at_most("solve_c_round_trip", worst_c, 1e-8));
    suite.checks.push_back(at_most("bang_singular_bang_final_error", worst_state, 1e-6));
    suite.checks.push_back({"singular_control_below_bound", worst_u < 1.0, worst_u, 1.0, {}});
  });
  guarded(suite, "relaxation", [&] {
    const double t_min = min_time(gamma).T_min;
    const double t_zero = segment_times(gamma, 0.0).total();
    bool ok = true;
    for (double T : log_grid(t_min * 1.001, t_zero * 0.999, 20))
      if (bounded_energy_value(gamma, T) < average_energy(gamma, T)) ok = false;
    suite.checks.push_back(holds("bounded_energy_exceeds_unbounded", ok));
    const double near = t_min + 0.05 * (t_zero - t_min);
    const double far = t_min + 0.9 * (t_zero - t_min);
    const double gap_near = bounded_energy_value(gamma, near) - average_energy(gamma, near);
    const double gap_far = bounded_energy_value(gamma, far) - average_energy(gamma, far);
    suite.checks.push_back(holds("energy_gap_shrinks", gap_far < gap_near));
  });
  suite.checks.push_back(holds("threshold_flip", !joint_above_c0_arc(1.553) && joint_above_c0_arc(1.555)));
  return suite;
}

SuiteReport ermakov_suite(double gamma) {
  SuiteReport suite{"ermakov-sim", {}};
  guarded(suite, "residuals", [&] {
    const double T = free_time_optimum(gamma).horizon;
    const UnboundedSynthesis syn = build_protocol(gamma, T);
    IntegratorConfig cfg;
    cfg.step = 1e-4;
    const Trajectory traj = simulate(CoolingProblem(gamma, T), syn.protocol, cfg);
    suite.checks.push_back(at_most("singular_residual", ermakov_residual(traj, syn.protocol), 1e-5));
    double drift = 0.0;
    const std::size_t last = syn.protocol.segments().size() - 1;
    for (const auto& s : traj.samples) {
      if (s.segment == last) continue;  // already past the closing impulse
      drift = std::max(drift, std::abs(s.state.x2 * s.state.x2 - 1.0 / (s.state.x1 * s.state.x1) - syn.arc.c));
    }
    suite.checks.push_back(at_most("singular_invariant_drift", drift, 1e-9));
  });
  guarded(suite, "bang_conservation", [&] {
    const BangBangSolution bb = min_time(gamma);
    IntegratorConfig cfg;
    cfg.step = 1e-5;
    const Trajectory traj = simulate(CoolingProblem(gamma, bb.T_min), bb.protocol, cfg);
    const double K = gamma * gamma + 1.0 / (gamma * gamma);
    double drift = 0.0;
    for (const auto& s : traj.samples) {
      const double x1 = s.state.x1, x2 = s.state.x2;
      const double inv = 1.0 / (x1 * x1);
      const double v = s.segment == 0 ? x2 * x2 - x1 * x1 + inv : x2 * x2 + x1 * x1 + inv - K;
      drift = std::max(drift, std::abs(v) / (s.segment == 0 ? 1.0 : K));
    }
    suite.checks.push_back(at_most("bang_invariant_drift", drift, 1e-9));
    suite.checks.push_back(at_most("bang_residual", ermakov_residual(traj, bb.protocol), 1e-5));
  });
  guarded(suite, "convergence_order", [&] {
    const BangBangSolution bb = min_time(gamma);
    const CoolingProblem prob(gamma, bb.T_min);
    auto error_at = [&](double h) {
      IntegratorConfig cfg;
      cfg.step = h;
      const State e = simulate(prob, bb.protocol, cfg).final_sample().state;
      return std::hypot(e.x1 - gamma, e.x2);
    };
    const double ratio = error_at(2e-2) / error_at(1e-2);
    suite.checks.push_back({"rk4_halving_ratio", ratio > 12.0 && ratio < 20.0, ratio, 16.0, "expected about 16"});
  });
  return suite;
}

SuiteReport pmp_suite(double gamma, std::uint64_t seed) {
  SuiteReport suite{"pmp-analysis", {}};
  guarded(suite, "lie_determinants", [&] {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dx1(0.5, 20.0), dx2(-5.0, 5.0), dE(1e-3, 5.0);
    double worst = 0.0, feedback = 0.0;
    for (int i = 0; i < 100; ++i) {
      const AugmentedState s{dx1(rng), dx2(rng), 0.0, dE(rng)};
      const LieDeterminants closed = lie_determinants(s);
      const LieDeterminants num = numeric_lie_determinants(s);
      worst = std::max({worst, rel_err(num.D, closed.D), rel_err(num.Dprime, closed.Dprime),
                        rel_err(num.Dsecond, closed.Dsecond)});
      feedback = std::max(feedback, std::abs(closed.singular_control() - singular_feedback(s.x1)));
    }
    suite.checks.push_back(at_most("determinants_vs_brackets", worst, 1e-5));
    suite.checks.push_back(at_most("singular_control_agreement", feedback, 0.0));
  });
  guarded(suite, "conjugate_scan", [&] {
    bool none = true, negative = true;
    for (double T : {5.0, free_time_optimum(gamma).horizon, 1.2 * turning_horizon(gamma)}) {
      const ConjugateScan scan = conjugate_point_scan(gamma, T);
      none = none && !scan.conjugate_time && !scan.collinear_time;
      negative = negative && scan.min_negative_dx1 > 0.0 && scan.dx1_strictly_decreasing;
    }
    suite.checks.push_back(holds("no_conjugate_point", none));
    suite.checks.push_back(holds("jacobi_dx1_negative", negative));
  });
  guarded(suite, "hyperbolicity", [&] {
    bool ok = true;
    for (double T : log_grid(0.5, 500.0, 50)) ok = ok && hyperbolic_test(arc_constant(gamma, T), average_energy(gamma, T));
    suite.checks.push_back(holds("singular_arcs_hyperbolic", ok));
  });
  guarded(suite, "hamiltonian", [&] {
    const double T = 100.0;
    const UnboundedSynthesis syn = build_protocol(gamma, T);
    const State start = apply_impulse(kInitialState, syn.initial_weight);
    const ExtremalRun run = integrate_extremal(start, singular_adjoint(start), ControlLaw::singular(), T, 1e-3);
    suite.checks.push_back(at_most("hamiltonian_drift", run.max_hamiltonian_drift, 1e-8));
    suite.checks.push_back(at_most("switching_function_on_singular_arc", run.max_abs_lambda2, 1e-8));
  });
  return suite;
}

SuiteReport protocol_suite(const Document& doc, const IntegratorConfig& cfg) {
  SuiteReport suite{"protocol-file", {}};
  guarded(suite, "simulate", [&] {
    const Trajectory traj = simulate(doc.problem, doc.protocol, cfg);
    const BoundaryReport r = boundary_check(traj, doc.problem.gamma());
    suite.checks.push_back(at_most("boundary_conditions", r.max_enforced(), 1e-6, r.control_conditions));
    if (doc.problem.bound_mode() == BoundMode::SymmetricUnit) {
      double worst = 0.0;
      for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.u));
      suite.checks.push_back(at_most("control_bound", worst, 1.0));
    }
  });
  return suite;
}

double expanding_mode_step_infidelity(SplitStepper& stepper, const Grid& grid, unsigned level,
                                      const ClassicalState& cl, bool singular, double u, double dt) {
  GridWavefunction psi = expanding_mode(level, cl.state.x1, cl.state.x2, cl.phase, grid);
  const double u0 = singular ? singular_feedback(cl.state.x1) : u;
  const ClassicalState next = advance_classical(cl, singular, u, dt);
  stepper.step(psi, u0, next.u, dt);
  const GridWavefunction target = expanding_mode(level, next.state.x1, next.state.x2, next.phase, grid);
  return 1.0 - fidelity(psi, target) / (psi.norm() * target.norm());
}

SchrodingerRun run_schrodinger(const SchrodingerOptions& opt) {
  SchrodingerRun run;
  run.options = opt;
  const double gamma = opt.gamma;
  Protocol protocol;
  switch (opt.protocol) {
    case SchrodingerProtocol::BangBang: {
      const BangBangSolution bb = min_time(gamma);
      protocol = bb.protocol;
      run.horizon = bb.T_min;
      break;
    }
    case SchrodingerProtocol::BangSingularBang:
      protocol = solve_c(gamma, opt.horizon).protocol;
      run.horizon = opt.horizon;
      break;
    case SchrodingerProtocol::Unbounded:
      protocol = build_protocol(gamma, opt.horizon).protocol;
      run.horizon = opt.horizon;
      break;
  }
  const CoolingProblem problem(gamma, run.horizon,
                               opt.protocol == SchrodingerProtocol::Unbounded ? BoundMode::Unbounded
                                                                              : BoundMode::SymmetricUnit);
  const Grid grid(opt.half_width > 0.0 ? opt.half_width : 10.0 * gamma, opt.points);
  const double omega_T = problem.final_frequency();
  check_resolution({opt.n_max, 1.0}, grid);
  check_resolution({opt.n_max, omega_T}, grid);

  const GridWavefunction psi0 = eigenstate({opt.level, 1.0}, grid);
  run.initial_populations = populations(psi0, 1.0, opt.n_max);

  PropagationConfig cfg;
  cfg.steps = opt.steps > 0 ? opt.steps : 200'000;
  cfg.impulse_mode = opt.impulse_mode;
  cfg.observe_every = std::max<std::size_t>(1, cfg.steps / std::max<std::size_t>(1, opt.checkpoints + 1));

  SplitStepper probe(grid);
  std::vector<double> pending = opt.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;
  const double dt_nominal = run.horizon / static_cast<double>(cfg.steps);

  auto observer = [&](const GridWavefunction& psi, const ClassicalState& cl) {
    while (next_snapshot < pending.size() && pending[next_snapshot] <= cl.t + 0.5 * dt_nominal) {
      Snapshot snap;
      snap.t = cl.t;
      for (std::size_t j = 0; j < grid.points; ++j) snap.x.push_back(grid.x(j));
      snap.psi = psi.amplitudes();
      run.snapshots.push_back(std::move(snap));
      ++next_snapshot;
    }
    if (cl.t <= 0.0 || cl.t >= run.horizon * (1.0 - 1e-12)) return;
    const GridWavefunction mode = expanding_mode(opt.level, cl.state.x1, cl.state.x2, cl.phase, grid);
    run.min_mode_fidelity = std::min(run.min_mode_fidelity, fidelity(psi, mode) / (psi.norm() * mode.norm()));
    const double e_grid = probe.energy(psi, cl.u);
    const double e_closed = instantaneous_energy(cl.state, cl.u, opt.level);
    const double scale = (2.0 * opt.level + 1.0) / 4.0 *
                         (cl.state.x2 * cl.state.x2 + std::abs(cl.u) * cl.state.x1 * cl.state.x1 +
                          1.0 / (cl.state.x1 * cl.state.x1));
    run.max_energy_error = std::max(run.max_energy_error, std::abs(e_grid - e_closed) / scale);
    const auto& seg = protocol.segments()[cl.segment];
    const bool singular = std::holds_alternative<Singular>(seg);
    const double u = singular ? 0.0 : std::get<Bang>(seg).u;
    run.max_step_infidelity = std::max(
        run.max_step_infidelity, expanding_mode_step_infidelity(probe, grid, opt.level, cl, singular, u, dt_nominal));
  };

  const PropagationResult res = propagate(psi0, problem, protocol, cfg, observer);
  run.steps = res.steps;
  run.max_norm_drift = res.max_norm_drift;
  run.final_classical = res.classical.state;
  run.final_fidelity = fidelity(res.psi, eigenstate({opt.level, omega_T}, grid));
  run.final_populations = populations(res.psi, omega_T, opt.n_max);
  while (next_snapshot < pending.size()) {
    Snapshot snap;
    snap.t = res.classical.t;
    for (std::size_t j = 0; j < grid.points; ++j) snap.x.push_back(grid.x(j));
    snap.psi = res.psi.amplitudes();
    run.snapshots.push_back(std::move(snap));
    ++next_snapshot;
  }
  return run;
}

SuiteReport schrodinger_suite(const SchrodingerRun& run) {
  SuiteReport suite{"schrodinger-verify", {}};
  const unsigned n = run.options.level;
  suite.checks.push_back(at_least("final_fidelity", run.final_fidelity, n == 0 ? 0.999 : 0.998));
  suite.checks.push_back(at_most("expanding_mode_step_infidelity", run.max_step_infidelity, 1e-8));
  suite.checks.push_back(at_least("expanding_mode_fidelity", run.min_mode_fidelity, 0.9999));
  suite.checks.push_back(at_most("energy_vs_closed_form", run.max_energy_error, 1e-4));
  suite.checks.push_back(at_most("norm_drift", run.max_norm_drift, 1e-9));
  double total = 0.0;
  for (double p : run.final_populations) total += p;
  suite.checks.push_back(at_most("population_sum", total, 1.0 + 1e-8));
  return suite;
}

std::vector<SuiteReport> run_verification(const VerifyOptions& opt) {
  std::vector<SuiteReport> suites;
  suites.push_back(unbounded_suite(opt.gamma, opt.integrator));
  suites.push_back(bounded_suite(opt.gamma, opt.integrator));
  suites.push_back(ermakov_suite(opt.gamma));
  suites.push_back(pmp_suite(opt.gamma, opt.seed));
  if (opt.protocol) suites.push_back(protocol_suite(*opt.protocol, opt.integrator));
  if (opt.schrodinger) {
    SuiteReport s{"schrodinger-verify", {}};
    try {
      s = schrodinger_suite(run_schrodinger(opt.schrodinger_options));
    } catch (const Error& e) {
      s.checks.push_back({"run", false, 0.0, 0.0, e.what()});
    }
    suites.push_back(std::move(s));
  }
  return suites;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json suite_to_json(const SuiteReport& s) {
  json checks = json::array();
  for (const auto& c : s.checks) {
    json j{{"name", c.name}, {"passed", c.passed}, {"value", number_or_null(c.value)},
           {"threshold", number_or_null(c.threshold)}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  return {{"suite", s.name}, {"passed", s.passed()}, {"checks", std::move(checks)}};
}

}  // namespace

std::string suites_json(const std::vector<SuiteReport>& suites) {
  json arr = json::array();
  for (const auto& s : suites) arr.push_back(suite_to_json(s));
  json doc{{"passed", all_passed(suites)}, {"suites", std::move(arr)}};
  return doc.dump(2) + "\n";
}

std::string schrodinger_json(const SchrodingerRun& run, const SuiteReport& suite) {
  const char* kind = run.options.protocol == SchrodingerProtocol::BangBang           ? "bang-bang"
                     : run.options.protocol == SchrodingerProtocol::BangSingularBang ? "bang-singular-bang"
                                                                                      : "unbounded";
  json doc{{"gamma", run.options.gamma},
           {"level", run.options.level},
           {"protocol", kind},
           {"horizon", run.horizon},
           {"grid_points", run.options.points},
           {"steps", run.steps},
           {"final_fidelity", run.final_fidelity},
           {"initial_populations", run.initial_populations},
           {"final_populations", run.final_populations},
           {"max_norm_drift", run.max_norm_drift},
           {"max_energy_error", run.max_energy_error},
           {"min_expanding_mode_fidelity", run.min_mode_fidelity},
           {"max_step_infidelity", run.max_step_infidelity},
           {"final_classical", {run.final_classical.x1, run.final_classical.x2}},
           {"checks", suite_to_json(suite)}};
  return doc.dump(2) + "\n";
}

std::string snapshots_csv(const SchrodingerRun& run) {
  std::string out = "t,x,re_psi,im_psi\n";
  for (const auto& s : run.snapshots)
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      out += format_double(s.t) + ',' + format_double(s.x[j]) + ',' + format_double(s.psi[j].real()) + ',' +
             format_double(s.psi[j].imag()) + '\n';
    }
  return out;
}

std::string pmp_report(const PmpReportOptions& opt, bool& passed) {
  const double gamma = opt.gamma;
  const double T = opt.horizon.value_or(free_time_optimum(gamma).horizon);
  passed = true;
  json doc{{"gamma", gamma}, {"horizon", T}};

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> dx1(0.5, 20.0), dx2(-5.0, 5.0), dE(1e-3, 5.0);
  json dets = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const AugmentedState s{dx1(rng), dx2(rng), 0.0, dE(rng)};
    const LieDeterminants c = lie_determinants(s);
    const LieDeterminants n = numeric_lie_determinants(s);
    const double err = std::max({rel_err(n.D, c.D), rel_err(n.Dprime, c.Dprime), rel_err(n.Dsecond, c.Dsecond)});
    worst = std::max(worst, err);
    dets.push_back({{"x1", s.x1}, {"x2", s.x2}, {"Ebar", s.Ebar},
                    {"closed", {c.D, c.Dprime, c.Dsecond}}, {"numeric", {n.D, n.Dprime, n.Dsecond}},
                    {"rel_error", err}, {"singular_control", c.singular_control()}});
  }
  passed = passed && worst <= 1e-5;
  doc["determinants"] = {{"samples", std::move(dets)}, {"max_rel_error", worst}, {"tolerance", 1e-5}};

  const SingularArc arc = arc_constant(gamma, T);
  const double E = average_energy(gamma, T);
  const bool hyper = hyperbolic_test(arc, E);
  passed = passed && hyper;
  doc["hyperbolicity"] = {{"c", arc.c},
                          {"Ebar", E},
                          {"margin", hyperbolicity_margin(arc, E)},
                          {"two_f_over_T2", 2.0 * appendix_f(gamma, T) / (T * T)},
                          {"hyperbolic", hyper}};

  const ConjugateScan scan = conjugate_point_scan(gamma, T);
  passed = passed && !scan.conjugate_time && !scan.collinear_time;
  doc["conjugate_scan"] = {{"grid_points", scan.grid_points},
                           {"conjugate_time", scan.conjugate_time ? json(*scan.conjugate_time) : json(nullptr)},
                           {"collinear_time", scan.collinear_time ? json(*scan.collinear_time) : json(nullptr)},
                           {"min_negative_dx1", scan.min_negative_dx1},
                           {"dx1_strictly_decreasing", scan.dx1_strictly_decreasing},
                           {"final_variation", scan.final_variation}};

  const UnboundedSynthesis syn = build_protocol(gamma, T);
  const State start = apply_impulse(kInitialState, syn.initial_weight);
  const ExtremalRun ext = integrate_extremal(start, singular_adjoint(start), ControlLaw::singular(), T, 1e-3);
  passed = passed && ext.max_hamiltonian_drift < 1e-8;
  doc["hamiltonian"] = {{"initial", ext.samples.front().hamiltonian},
                        {"closed_form", 0.5 * arc.c},
                        {"max_drift", ext.max_hamiltonian_drift},
                        {"max_abs_lambda2", ext.max_abs_lambda2},
                        {"tolerance", 1e-8}};
  doc["passed"] = passed;
  return doc.dump(2) + "\n";
}

}  // namespace fcool
