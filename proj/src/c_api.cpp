#include "fcool/fcool.h"

#include <exception>
#include <new>
#include <string>

#include "fcool/bounded.hpp"
#include "fcool/error.hpp"
#include "fcool/ermakov_sim.hpp"
#include "fcool/serialization.hpp"
#include "fcool/unbounded.hpp"
#include "fcool/verification.hpp"

struct fc_problem {
  fcool::CoolingProblem value;
};

struct fc_protocol {
  fcool::Protocol value;
};

struct fc_trajectory {
  fcool::Trajectory value;
};

struct fc_text {
  std::string value;
};

namespace {

thread_local std::string g_last_error;

fc_status to_status(fcool::ErrorCode code) {
  using fcool::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return FC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return FC_ERR_DOMAIN;
    case ErrorCode::Infeasible: return FC_ERR_INFEASIBLE;
    case ErrorCode::UnsupportedRegion: return FC_ERR_UNSUPPORTED_REGION;
    case ErrorCode::Convergence: return FC_ERR_CONVERGENCE;
    case ErrorCode::Inconsistency: return FC_ERR_INCONSISTENCY;
    case ErrorCode::Resolution: return FC_ERR_RESOLUTION;
    case ErrorCode::Boundary: return FC_ERR_BOUNDARY;
    case ErrorCode::MaximumPrinciple: return FC_ERR_MAXIMUM_PRINCIPLE;
    case ErrorCode::Parse: return FC_ERR_PARSE;
    case ErrorCode::Internal: return FC_ERR_INTERNAL;
  }
  return FC_ERR_INTERNAL;
}

template <class F>
fc_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FC_OK;
  } catch (const fcool::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return FC_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) fcool::fail(fcool::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

fcool::IntegratorConfig to_config(const fc_integrator_config* cfg) {
  fcool::IntegratorConfig out;
  if (!cfg) return out;
  out.method = cfg->method == FC_METHOD_RK45 ? fcool::IntegratorMethod::RK45 : fcool::IntegratorMethod::RK4;
  out.step = cfg->step;
  out.tolerance = cfg->tolerance;
  out.max_steps = static_cast<std::size_t>(cfg->max_steps);
  out.record_every = static_cast<std::size_t>(cfg->record_every);
  return out;
}

fcool::SchrodingerOptions to_options(const fc_schrodinger_options& o) {
  fcool::SchrodingerOptions out;
  out.gamma = o.gamma;
  out.level = o.level;
  out.points = o.points;
  out.half_width = o.half_width;
  out.steps = o.steps;
  out.protocol = o.protocol == FC_PDE_BANG_SINGULAR_BANG ? fcool::SchrodingerProtocol::BangSingularBang
                 : o.protocol == FC_PDE_UNBOUNDED        ? fcool::SchrodingerProtocol::Unbounded
                                                         : fcool::SchrodingerProtocol::BangBang;
  out.horizon = o.horizon;
  out.impulse_mode = o.rectangular_impulses ? fcool::ImpulseMode::RectangularPulse : fcool::ImpulseMode::ExactKick;
  out.n_max = o.n_max;
  if (o.snapshot_times && o.snapshot_count > 0) out.snapshot_times.assign(o.snapshot_times, o.snapshot_times + o.snapshot_count);
  return out;
}

fc_text* make_text(std::string s) { return new fc_text{std::move(s)}; }

}  // namespace

extern "C" {

const char* fc_status_string(fc_status status) {
  switch (status) {
    case FC_OK: return "ok";
    case FC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FC_ERR_DOMAIN: return "domain error";
    case FC_ERR_INFEASIBLE: return "infeasible";
    case FC_ERR_UNSUPPORTED_REGION: return "unsupported region";
    case FC_ERR_CONVERGENCE: return "convergence failure";
    case FC_ERR_INCONSISTENCY: return "inconsistency";
    case FC_ERR_RESOLUTION: return "insufficient resolution";
    case FC_ERR_BOUNDARY: return "boundary violation";
    case FC_ERR_MAXIMUM_PRINCIPLE: return "maximum principle violation";
    case FC_ERR_PARSE: return "parse error";
    case FC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fc_last_error(void) { return g_last_error.c_str(); }

const char* fc_version(void) { return "1.0.0"; }

const char* fc_text_data(const fc_text* text) { return text ? text->value.c_str() : ""; }
size_t fc_text_size(const fc_text* text) { return text ? text->value.size() : 0; }
void fc_text_destroy(fc_text* text) { delete text; }

fc_status fc_problem_create(double gamma, int has_horizon, double horizon, fc_bound_mode mode, fc_problem** out) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    std::optional<double> h;
    if (has_horizon) h = horizon;
    const auto m = mode == FC_BOUND_SYMMETRIC_UNIT ? fcool::BoundMode::SymmetricUnit : fcool::BoundMode::Unbounded;
    *out = new fc_problem{fcool::CoolingProblem(gamma, h, m)};
  });
}

void fc_problem_destroy(fc_problem* problem) { delete problem; }

double fc_problem_gamma(const fc_problem* problem) { return problem ? problem->value.gamma() : 0.0; }

int fc_problem_horizon(const fc_problem* problem, double* horizon) {
  if (!problem || !problem->value.horizon()) return 0;
  if (horizon) *horizon = *problem->value.horizon();
  return 1;
}

fc_bound_mode fc_problem_bound_mode(const fc_problem* problem) {
  return problem && problem->value.bound_mode() == fcool::BoundMode::SymmetricUnit ? FC_BOUND_SYMMETRIC_UNIT
                                                                                    : FC_BOUND_UNBOUNDED;
}

fc_status fc_protocol_create(fc_protocol** out) {
  return guard([&] {
    require(out, "out");
    *out = new fc_protocol{};
  });
}

void fc_protocol_destroy(fc_protocol* protocol) { delete protocol; }

fc_status fc_protocol_add_impulse(fc_protocol* protocol, double weight) {
  return guard([&] {
    require(protocol, "protocol");
    protocol->value.impulse(weight);
  });
}

fc_status fc_protocol_add_bang(fc_protocol* protocol, double u, double duration) {
  return guard([&] {
    require(protocol, "protocol");
    protocol->value.bang(u, duration);
  });
}

fc_status fc_protocol_add_singular(fc_protocol* protocol, double duration) {
  return guard([&] {
    require(protocol, "protocol");
    protocol->value.singular(duration);
  });
}

size_t fc_protocol_segment_count(const fc_protocol* protocol) { return protocol ? protocol->value.segments().size() : 0; }

fc_status fc_protocol_segment(const fc_protocol* protocol, size_t index, fc_segment* out) {
  return guard([&] {
    require(protocol, "protocol");
    require(out, "out");
    const auto& segs = protocol->value.segments();
    if (index >= segs.size()) fcool::fail(fcool::ErrorCode::InvalidArgument, "segment index out of range");
    const auto& seg = segs[index];
    if (const auto* i = std::get_if<fcool::Impulse>(&seg))
      *out = {FC_SEGMENT_IMPULSE, i->weight, 0.0};
    else if (const auto* b = std::get_if<fcool::Bang>(&seg))
      *out = {FC_SEGMENT_BANG, b->u, b->duration};
    else
      *out = {FC_SEGMENT_SINGULAR, 0.0, std::get<fcool::Singular>(seg).duration};
  });
}

double fc_protocol_duration(const fc_protocol* protocol) { return protocol ? protocol->value.total_duration() : 0.0; }

fc_status fc_document_parse(const char* json, size_t length, fc_problem** problem, fc_protocol** protocol) {
  return guard([&] {
    require(json, "json");
    require(problem, "problem");
    require(protocol, "protocol");
    *problem = nullptr;
    *protocol = nullptr;
    fcool::Document doc = fcool::parse_document(std::string_view(json, length));
    auto p = std::make_unique<fc_problem>(fc_problem{doc.problem});
    auto q = std::make_unique<fc_protocol>(fc_protocol{std::move(doc.protocol)});
    *problem = p.release();
    *protocol = q.release();
  });
}

fc_status fc_document_write(const fc_problem* problem, const fc_protocol* protocol, fc_text** out) {
  return guard([&] {
    require(problem, "problem");
    require(protocol, "protocol");
    require(out, "out");
    *out = make_text(fcool::write_document(problem->value, protocol->value));
  });
}

fc_status fc_unbounded_synthesize(double gamma, double horizon, fc_unbounded_summary* summary, fc_protocol** protocol) {
  return guard([&] {
    const fcool::UnboundedSynthesis s = fcool::build_protocol(gamma, horizon);
    if (summary)
      *summary = {s.gamma, s.horizon, s.B, s.arc.c, s.initial_weight, s.final_weight, s.terminal_velocity,
                  s.average_energy};
    if (protocol) *protocol = new fc_protocol{s.protocol};
  });
}

fc_status fc_unbounded_energy(double gamma, double horizon, double* energy) {
  return guard([&] {
    require(energy, "energy");
    *energy = fcool::average_energy(gamma, horizon);
  });
}

fc_status fc_free_time_optimum(double gamma, double* horizon, double* c) {
  return guard([&] {
    const auto opt = fcool::free_time_optimum(gamma);
    if (horizon) *horizon = opt.horizon;
    if (c) *c = opt.c;
  });
}

fc_status fc_singular_state(double gamma, double horizon, double t, double* x1, double* x2) {
  return guard([&] {
    require(x1, "x1");
    require(x2, "x2");
    *x1 = fcool::singular_x1(t, gamma, horizon);
    *x2 = fcool::singular_x2(t, gamma, horizon);
  });
}

fc_status fc_min_time(double gamma, fc_min_time_summary* summary, fc_protocol** protocol) {
  return guard([&] {
    const fcool::BangBangSolution s = fcool::min_time(gamma);
    if (summary) *summary = {s.T1, s.T2, s.T_min, s.x1_joint};
    if (protocol) *protocol = new fc_protocol{s.protocol};
  });
}

fc_status fc_bounded_synthesize(double gamma, double horizon, fc_bounded_summary* summary, fc_protocol** protocol) {
  return guard([&] {
    const fcool::BoundedEnergy e = fcool::bounded_energy(gamma, horizon);
    const auto& s = e.synthesis;
    if (summary) *summary = {s.gamma, s.horizon, s.c, s.T1p, s.T2p, s.T3p, s.x1_a, s.x1_b, e.average_energy};
    if (protocol) *protocol = new fc_protocol{s.protocol};
  });
}

fc_status fc_bounded_state(double gamma, double horizon, double t, double* x1, double* x2) {
  return guard([&] {
    require(x1, "x1");
    require(x2, "x2");
    const fcool::State s = fcool::state_at(fcool::solve_c(gamma, horizon), t);
    *x1 = s.x1;
    *x2 = s.x2;
  });
}

fc_status fc_joint_above_c0_arc(double gamma, int* above) {
  return guard([&] {
    require(above, "above");
    *above = fcool::joint_above_c0_arc(gamma) ? 1 : 0;
  });
}

void fc_integrator_config_default(fc_integrator_config* cfg) {
  if (!cfg) return;
  const fcool::IntegratorConfig d;
  *cfg = {FC_METHOD_RK4, d.step, d.tolerance, static_cast<uint64_t>(d.max_steps), static_cast<uint64_t>(d.record_every)};
}

fc_status fc_simulate(const fc_problem* problem, const fc_protocol* protocol, const fc_integrator_config* cfg,
                      fc_trajectory** out) {
  return guard([&] {
    require(problem, "problem");
    require(protocol, "protocol");
    require(out, "out");
    *out = nullptr;
    *out = new fc_trajectory{fcool::simulate(problem->value, protocol->value, to_config(cfg))};
  });
}

void fc_trajectory_destroy(fc_trajectory* trajectory) { delete trajectory; }

size_t fc_trajectory_size(const fc_trajectory* trajectory) { return trajectory ? trajectory->value.samples.size() : 0; }

fc_status fc_trajectory_sample(const fc_trajectory* trajectory, size_t index, fc_sample* out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(out, "out");
    const auto& samples = trajectory->value.samples;
    if (index >= samples.size()) fcool::fail(fcool::ErrorCode::InvalidArgument, "sample index out of range");
    const auto& s = samples[index];
    *out = {s.t, s.state.x1, s.state.x2, s.u, s.running_cost};
  });
}

double fc_trajectory_cost(const fc_trajectory* trajectory) { return trajectory ? trajectory->value.cost_J : 0.0; }

double fc_trajectory_average_energy(const fc_trajectory* trajectory) {
  return trajectory ? trajectory->value.average_energy() : 0.0;
}

fc_status fc_trajectory_boundary(const fc_trajectory* trajectory, double gamma, fc_boundary_report* out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(out, "out");
    const fcool::BoundaryReport r = fcool::boundary_check(trajectory->value, gamma);
    *out = {r.initial_position, r.initial_velocity, r.final_position, r.final_velocity};
  });
}

fc_status fc_trajectory_residual(const fc_trajectory* trajectory, const fc_protocol* protocol, double* residual) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(protocol, "protocol");
    require(residual, "residual");
    *residual = fcool::ermakov_residual(trajectory->value, protocol->value);
  });
}

fc_status fc_trajectory_write_csv(const fc_trajectory* trajectory, fc_text** out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(out, "out");
    *out = make_text(fcool::trajectory_csv(trajectory->value));
  });
}

fc_status fc_pmp_report(double gamma, int has_horizon, double horizon, size_t samples, uint64_t seed, fc_text** json,
                        int* all_passed) {
  return guard([&] {
    require(json, "json");
    fcool::PmpReportOptions opt;
    opt.gamma = gamma;
    if (has_horizon) opt.horizon = horizon;
    opt.samples = samples;
    opt.seed = seed;
    bool passed = false;
    std::string doc = fcool::pmp_report(opt, passed);
    *json = make_text(std::move(doc));
    if (all_passed) *all_passed = passed ? 1 : 0;
  });
}

void fc_schrodinger_options_default(fc_schrodinger_options* options) {
  if (!options) return;
  const fcool::SchrodingerOptions d;
  *options = {d.gamma, d.level, d.points, d.half_width, d.steps, FC_PDE_BANG_BANG, d.horizon, 0, d.n_max, nullptr, 0};
}

fc_status fc_schrodinger_run(const fc_schrodinger_options* options, fc_text** json, fc_text** snapshots_csv,
                             int* all_passed) {
  return guard([&] {
    require(options, "options");
    require(json, "json");
    const fcool::SchrodingerRun run = fcool::run_schrodinger(to_options(*options));
    const fcool::SuiteReport suite = fcool::schrodinger_suite(run);
    *json = make_text(fcool::schrodinger_json(run, suite));
    if (snapshots_csv) *snapshots_csv = make_text(fcool::snapshots_csv(run));
    if (all_passed) *all_passed = suite.passed() ? 1 : 0;
  });
}

void fc_verify_options_default(fc_verify_options* options) {
  if (!options) return;
  options->gamma = 10.0;
  fc_integrator_config_default(&options->integrator);
  options->protocol_json = nullptr;
  options->protocol_json_length = 0;
  options->schrodinger = 0;
  fc_schrodinger_options_default(&options->schrodinger_options);
  options->seed = 1;
}

fc_status fc_verify(const fc_verify_options* options, fc_text** json, int* all_passed) {
  return guard([&] {
    require(options, "options");
    require(json, "json");
    fcool::VerifyOptions opt;
    opt.gamma = options->gamma;
    opt.integrator = to_config(&options->integrator);
    if (options->protocol_json)
      opt.protocol = fcool::parse_document(std::string_view(options->protocol_json, options->protocol_json_length));
    opt.schrodinger = options->schrodinger != 0;
    opt.schrodinger_options = to_options(options->schrodinger_options);
    opt.seed = options->seed;
    const auto suites = fcool::run_verification(opt);
    *json = make_text(fcool::suites_json(suites));
    if (all_passed) *all_passed = fcool::all_passed(suites) ? 1 : 0;
  });
}

}  // extern "C"
