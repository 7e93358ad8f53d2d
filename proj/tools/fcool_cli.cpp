// fcool: command-line front end over the C interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fcool/fcool.h"

namespace {

using nlohmann::json;

enum Exit : int { kOk = 0, kUsage = 1, kInfeasible = 2, kVerification = 3, kRuntime = 4 };

struct CliError {
  int code;
  std::string message;
};

int exit_for(fc_status st) {
  switch (st) {
    case FC_OK: return kOk;
    case FC_ERR_INVALID_ARGUMENT:
    case FC_ERR_PARSE: return kUsage;
    case FC_ERR_INFEASIBLE:
    case FC_ERR_UNSUPPORTED_REGION: return kInfeasible;
    default: return kRuntime;
  }
}

void check(fc_status st) {
  if (st != FC_OK) throw CliError{exit_for(st), std::string(fc_status_string(st)) + ": " + fc_last_error()};
}

struct ProblemDeleter {
  void operator()(fc_problem* p) const { fc_problem_destroy(p); }
};
struct ProtocolDeleter {
  void operator()(fc_protocol* p) const { fc_protocol_destroy(p); }
};
struct TrajectoryDeleter {
  void operator()(fc_trajectory* p) const { fc_trajectory_destroy(p); }
};
struct TextDeleter {
  void operator()(fc_text* p) const { fc_text_destroy(p); }
};
using ProblemPtr = std::unique_ptr<fc_problem, ProblemDeleter>;
using ProtocolPtr = std::unique_ptr<fc_protocol, ProtocolDeleter>;
using TrajectoryPtr = std::unique_ptr<fc_trajectory, TrajectoryDeleter>;
using TextPtr = std::unique_ptr<fc_text, TextDeleter>;

std::string take(fc_text* raw) {
  TextPtr t(raw);
  return std::string(fc_text_data(t.get()), fc_text_size(t.get()));
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Sweep {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  bool log = false;

  std::vector<double> points() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(count - 1);
      out[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
    }
    out.front() = min;
    out.back() = max;
    return out;
  }
};

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4) throw CliError{kUsage, "--sweep expects min:max:count[:log|linear]"};
  Sweep s;
  try {
    std::size_t used = 0;
    s.min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("min");
    s.max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("max");
    const long long n = std::stoll(parts[2], &used);
    if (used != parts[2].size() || n < 2) throw std::invalid_argument("count");
    s.count = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw CliError{kUsage, "invalid --sweep '" + text + "' (count must be an integer >= 2)"};
  }
  if (parts.size() == 4) {
    if (parts[3] == "log") s.log = true;
    else if (parts[3] != "linear") throw CliError{kUsage, "sweep spacing must be 'log' or 'linear'"};
  }
  if (!(s.min > 0.0) || !(s.max > s.min)) throw CliError{kUsage, "sweep requires 0 < min < max"};
  return s;
}

struct Config {
  double gamma = 10.0;
  std::optional<double> horizon;
  std::string sweep;
  std::string bound = "unbounded";
  std::string out;
  std::string format = "csv";
  std::string trajectory_dir;
  std::string protocol_file;
  std::string protocol_out;
  std::string method = "rk4";
  double step = 0.0;
  double tol = 1e-10;
  std::size_t record_every = 0;
  bool schrodinger = false;
  // schrodinger
  unsigned level = 0;
  std::size_t points = 4096;
  double half_width = 0.0;
  std::size_t steps = 0;
  std::string pde_protocol = "bang-bang";
  bool rectangular = false;
  unsigned n_max = 6;
  std::vector<double> snapshots;
  std::string snapshot_out;
  // pmp
  std::size_t samples = 100;
  std::uint64_t seed = 1;
};

bool symmetric(const Config& c) {
  if (c.bound == "symmetric" || c.bound == "symmetric_unit") return true;
  if (c.bound == "unbounded") return false;
  throw CliError{kUsage, "--bound must be 'unbounded' or 'symmetric'"};
}

std::vector<double> horizons(const Config& c) {
  if (!c.sweep.empty()) {
    if (c.horizon) throw CliError{kUsage, "--horizon and --sweep are mutually exclusive"};
    return parse_sweep(c.sweep).points();
  }
  if (c.horizon) {
    if (!(*c.horizon > 0.0)) throw CliError{kUsage, "--horizon must be positive"};
    return {*c.horizon};
  }
  return {};
}

fc_integrator_config integrator(const Config& c) {
  fc_integrator_config cfg;
  fc_integrator_config_default(&cfg);
  if (c.method == "rk45") cfg.method = FC_METHOD_RK45;
  else if (c.method != "rk4") throw CliError{kUsage, "--method must be 'rk4' or 'rk45'"};
  cfg.step = c.step;
  cfg.tolerance = c.tol;
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kUsage, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kUsage, "cannot write " + path};
  out << text;
  if (!out) throw CliError{kUsage, "write failed for " + path};
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) std::cout << text;
  else write_file(c.out, text);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  std::string render(const std::string& format) const {
    if (format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = r[i] ? json(*r[i]) : json(nullptr);
        arr.push_back(obj);
      }
      return arr.dump(2) + "\n";
    }
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + (r[i] ? fmt(*r[i]) : std::string("NA"));
      s += "\n";
    }
    return s;
  }
};

// Keeps about 2000 rows per trajectory file.
fc_integrator_config decimated(const Config& c, double horizon) {
  fc_integrator_config cfg = integrator(c);
  if (c.record_every > 0) {
    cfg.record_every = c.record_every;
  } else if (cfg.method == FC_METHOD_RK4) {
    const double h = cfg.step > 0.0 ? cfg.step : std::min(1e-4, horizon / 1e5);
    cfg.record_every = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(horizon / h / 2000.0)));
  }
  return cfg;
}

void write_trajectory(const Config& c, const std::string& name, double gamma, double horizon,
                      fc_bound_mode mode, const fc_protocol* protocol) {
  if (c.trajectory_dir.empty()) return;
  std::filesystem::create_directories(c.trajectory_dir);
  fc_problem* raw = nullptr;
  check(fc_problem_create(gamma, 1, horizon, mode, &raw));
  ProblemPtr problem(raw);
  const fc_integrator_config cfg = decimated(c, horizon);
  fc_trajectory* traj = nullptr;
  check(fc_simulate(problem.get(), protocol, &cfg, &traj));
  TrajectoryPtr t(traj);
  fc_text* csv = nullptr;
  check(fc_trajectory_write_csv(t.get(), &csv));
  write_file((std::filesystem::path(c.trajectory_dir) / (name + "_T" + fmt(horizon) + ".csv")).string(), take(csv));
}

void write_protocol(const Config& c, double gamma, double horizon, fc_bound_mode mode, const fc_protocol* protocol) {
  if (c.protocol_out.empty()) return;
  fc_problem* raw = nullptr;
  check(fc_problem_create(gamma, 1, horizon, mode, &raw));
  ProblemPtr problem(raw);
  fc_text* doc = nullptr;
  check(fc_document_write(problem.get(), protocol, &doc));
  write_file(c.protocol_out, take(doc));
}

int cmd_unbounded(const Config& c) {
  std::vector<double> ts = horizons(c);
  if (ts.empty()) {
    double t_star = 0.0;
    check(fc_free_time_optimum(c.gamma, &t_star, nullptr));
    ts = {t_star};
  }
  if (!c.protocol_out.empty() && ts.size() != 1) throw CliError{kUsage, "--protocol-out needs a single horizon"};
  Table table{{"T", "c", "Ebar", "x2_terminal", "w0", "wT"}, {}};
  for (double T : ts) {
    fc_unbounded_summary s;
    fc_protocol* raw = nullptr;
    check(fc_unbounded_synthesize(c.gamma, T, &s, &raw));
    ProtocolPtr protocol(raw);
    table.rows.push_back({T, s.c, s.average_energy, s.terminal_velocity, s.initial_weight, s.final_weight});
    write_trajectory(c, "unbounded", c.gamma, T, FC_BOUND_UNBOUNDED, protocol.get());
    write_protocol(c, c.gamma, T, FC_BOUND_UNBOUNDED, protocol.get());
  }
  emit(c, table.render(c.format));
  return kOk;
}

int cmd_bounded(const Config& c) {
  const std::vector<double> ts = horizons(c);
  if (ts.empty()) throw CliError{kUsage, "bounded needs --horizon or --sweep"};
  if (!c.protocol_out.empty() && ts.size() != 1) throw CliError{kUsage, "--protocol-out needs a single horizon"};
  Table table{{"T", "c", "T1p", "T2p", "T3p", "Ebar"}, {}};
  for (double T : ts) {
    fc_bounded_summary s;
    fc_protocol* raw = nullptr;
    const fc_status st = fc_bounded_synthesize(c.gamma, T, &s, &raw);
    ProtocolPtr protocol(raw);
    if (ts.size() > 1 && (st == FC_ERR_INFEASIBLE || st == FC_ERR_UNSUPPORTED_REGION)) {
      table.rows.push_back({T, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
      continue;
    }
    check(st);
    table.rows.push_back({T, s.c, s.T1, s.T2, s.T3, s.average_energy});
    write_trajectory(c, "bounded", c.gamma, T, FC_BOUND_SYMMETRIC_UNIT, protocol.get());
    write_protocol(c, c.gamma, T, FC_BOUND_SYMMETRIC_UNIT, protocol.get());
  }
  emit(c, table.render(c.format));
  return kOk;
}

int cmd_min_time(const Config& c) {
  fc_min_time_summary s;
  fc_protocol* raw = nullptr;
  check(fc_min_time(c.gamma, &s, &raw));
  ProtocolPtr protocol(raw);
  Table table{{"gamma", "T1", "T2", "T_min", "x1_joint"}, {{c.gamma, s.T1, s.T2, s.T_min, s.x1_joint}}};
  write_trajectory(c, "min_time", c.gamma, s.T_min, FC_BOUND_SYMMETRIC_UNIT, protocol.get());
  write_protocol(c, c.gamma, s.T_min, FC_BOUND_SYMMETRIC_UNIT, protocol.get());
  emit(c, table.render(c.format));
  return kOk;
}

int cmd_energy_curve(const Config& c) {
  if (c.sweep.empty()) throw CliError{kUsage, "energy-curve needs --sweep"};
  const std::vector<double> ts = horizons(c);
  const bool with_bounded = symmetric(c);
  Table table{{"T", "Ebar_unbounded"}, {}};
  if (with_bounded) table.columns.push_back("Ebar_bounded");
  for (double T : ts) {
    double e = 0.0;
    check(fc_unbounded_energy(c.gamma, T, &e));
    std::vector<std::optional<double>> row{T, e};
    if (with_bounded) {
      fc_bounded_summary s;
      const fc_status st = fc_bounded_synthesize(c.gamma, T, &s, nullptr);
      if (st == FC_OK && s.c > 0.0) row.emplace_back(s.average_energy);
      else if (st == FC_OK || st == FC_ERR_INFEASIBLE || st == FC_ERR_UNSUPPORTED_REGION) row.emplace_back(std::nullopt);
      else check(st);
    }
    table.rows.push_back(std::move(row));
  }
  emit(c, table.render(c.format));
  return kOk;
}

int report_verdict(const std::string& json_text, bool passed) {
  if (passed) return kOk;
  // Name the failing checks on stderr.
  const json doc = json::parse(json_text, nullptr, false);
  bool named = false;
  auto failed = [](const json& node) {
    return node.is_object() && node.contains("passed") && node["passed"].is_boolean() && !node["passed"].get<bool>();
  };
  auto scan = [&](const json& suite) {
    if (!suite.is_object()) return;
    for (const auto& check : suite.value("checks", json::array()))
      if (failed(check)) {
        std::cerr << "FAILED: " << suite.value("suite", "") << "/" << check.value("name", "") << "\n";
        named = true;
      }
  };
  if (doc.is_object() && doc.contains("suites"))
    for (const auto& suite : doc["suites"]) scan(suite);
  if (doc.is_object() && doc.contains("checks")) scan(doc["checks"]);
  if (doc.is_object() && !named)
    for (const auto& [key, value] : doc.items())
      if (failed(value)) std::cerr << "FAILED: " << key << "\n";
  std::cerr << "fcool: verification failed\n";
  return kVerification;
}

int cmd_pmp(const Config& c) {
  fc_text* raw = nullptr;
  int passed = 0;
  check(fc_pmp_report(c.gamma, c.horizon ? 1 : 0, c.horizon.value_or(0.0), c.samples, c.seed, &raw, &passed));
  const std::string text = take(raw);
  emit(c, text);
  return report_verdict(text, passed != 0);
}

fc_schrodinger_options schrodinger_options(const Config& c, bool gamma_given) {
  fc_schrodinger_options o;
  fc_schrodinger_options_default(&o);
  if (gamma_given) o.gamma = c.gamma;
  o.level = c.level;
  o.points = c.points;
  o.half_width = c.half_width;
  o.steps = c.steps;
  if (c.pde_protocol == "bang-bang") o.protocol = FC_PDE_BANG_BANG;
  else if (c.pde_protocol == "bang-singular-bang") o.protocol = FC_PDE_BANG_SINGULAR_BANG;
  else if (c.pde_protocol == "unbounded") o.protocol = FC_PDE_UNBOUNDED;
  else throw CliError{kUsage, "--pde-protocol must be bang-bang, bang-singular-bang or unbounded"};
  o.horizon = c.horizon.value_or(0.0);
  o.rectangular_impulses = c.rectangular ? 1 : 0;
  o.n_max = c.n_max;
  o.snapshot_times = c.snapshots.empty() ? nullptr : c.snapshots.data();
  o.snapshot_count = c.snapshots.size();
  return o;
}

int cmd_schrodinger(const Config& c, bool gamma_given) {
  const fc_schrodinger_options o = schrodinger_options(c, gamma_given);
  fc_text* report = nullptr;
  fc_text* snaps = nullptr;
  int passed = 0;
  check(fc_schrodinger_run(&o, &report, c.snapshot_out.empty() ? nullptr : &snaps, &passed));
  const std::string text = take(report);
  if (snaps) write_file(c.snapshot_out, take(snaps));
  emit(c, text);
  return report_verdict(text, passed != 0);
}

int cmd_verify(const Config& c, bool gamma_given) {
  fc_verify_options o;
  fc_verify_options_default(&o);
  o.gamma = c.gamma;
  o.integrator = integrator(c);
  std::string protocol_text;
  if (!c.protocol_file.empty()) {
    protocol_text = read_file(c.protocol_file);
    o.protocol_json = protocol_text.data();
    o.protocol_json_length = protocol_text.size();
  }
  o.schrodinger = c.schrodinger ? 1 : 0;
  o.schrodinger_options = schrodinger_options(c, gamma_given);
  o.seed = c.seed;
  fc_text* raw = nullptr;
  int passed = 0;
  check(fc_verify(&o, &raw, &passed));
  const std::string text = take(raw);
  emit(c, text);
  return report_verdict(text, passed != 0);
}

// Copies config-file values into options the command line left unset.
void apply_config(CLI::App& app, const std::string& path) {
  const std::string text = read_file(path);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw CliError{kUsage, "config " + path + " is not a JSON object"};
  for (auto& [key, value] : doc.items()) {
    CLI::Option* opt = nullptr;
    for (CLI::App* scope : {&app, app.get_subcommands().empty() ? &app : app.get_subcommands().front()}) {
      try {
        opt = scope->get_option("--" + key);
        break;
      } catch (const CLI::OptionNotFound&) {
      }
    }
    if (!opt) throw CliError{kUsage, "unknown config key '" + key + "'"};
    if (opt->count() > 0) continue;
    std::vector<std::string> tokens;
    auto token = [](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) return fmt(v.get<double>());
      throw CliError{kUsage, "unsupported config value"};
    };
    if (value.is_array())
      for (const auto& v : value) tokens.push_back(token(v));
    else
      tokens.push_back(token(value));
    try {
      opt->add_result(tokens);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw CliError{kUsage, "config key '" + key + "': " + e.what()};
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frictionless cooling: syntheses, sweeps and verification"};
  app.set_version_flag("--version", std::string(fc_version()));
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option values; command-line flags win");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--gamma", cfg.gamma, "expansion ratio sqrt(omega0/omegaT) > 1");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto horizon = [&](CLI::App* sub) {
    sub->add_option("--horizon", cfg.horizon, "rescaled final time omega0 T");
    sub->add_option("--sweep", cfg.sweep, "horizon sweep min:max:count[:log|linear]");
  };
  auto integration = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "rk4 or rk45");
    sub->add_option("--step", cfg.step, "RK4 step (default min(1e-4, T/1e5))");
    sub->add_option("--tol", cfg.tol, "RK45 tolerance");
  };
  auto trajectories = [&](CLI::App* sub) {
    sub->add_option("--trajectory-dir", cfg.trajectory_dir, "write one trajectory CSV per horizon here");
    sub->add_option("--record-every", cfg.record_every, "keep every k-th integration step (default ~2000 rows)");
    sub->add_option("--protocol-out", cfg.protocol_out, "write the synthesized protocol document");
  };
  auto pde = [&](CLI::App* sub) {
    sub->add_option("--level", cfg.level, "oscillator level n");
    sub->add_option("--points", cfg.points, "grid points (power of two)");
    sub->add_option("--half-width", cfg.half_width, "grid half width L (default 10 gamma)");
    sub->add_option("--steps", cfg.steps, "split-step count (default 2e5)");
    sub->add_option("--pde-protocol", cfg.pde_protocol, "bang-bang, bang-singular-bang or unbounded");
    sub->add_flag("--rectangular", cfg.rectangular, "replace impulses by rectangular pulses of width 1e-3");
    sub->add_option("--n-max", cfg.n_max, "highest level in the population report");
    sub->add_option("--snapshot", cfg.snapshots, "times at which to dump (x, Re psi, Im psi)");
    sub->add_option("--snapshot-out", cfg.snapshot_out, "CSV file for snapshots");
  };

  auto* unbounded = app.add_subcommand("unbounded", "impulse-singular-impulse synthesis");
  common(unbounded);
  horizon(unbounded);
  integration(unbounded);
  trajectories(unbounded);

  auto* bounded = app.add_subcommand("bounded", "bang-singular-bang synthesis under |u| <= 1");
  common(bounded);
  horizon(bounded);
  integration(bounded);
  trajectories(bounded);

  auto* min_time = app.add_subcommand("min-time", "minimum-time bang-bang transfer under |u| <= 1");
  common(min_time);
  integration(min_time);
  trajectories(min_time);

  auto* energy = app.add_subcommand("energy-curve", "time-averaged energy against the final time");
  common(energy);
  horizon(energy);
  energy->add_option("--bound", cfg.bound, "unbounded, or symmetric to add the |u| <= 1 column");

  auto* pmp = app.add_subcommand("pmp", "maximum-principle report");
  common(pmp);
  pmp->add_option("--horizon", cfg.horizon, "final time (default: free-time optimum)");
  pmp->add_option("--samples", cfg.samples, "random states for the bracket check");
  pmp->add_option("--seed", cfg.seed, "random seed");

  auto* verify = app.add_subcommand("verify", "run every invariant suite");
  common(verify);
  integration(verify);
  verify->add_option("--protocol", cfg.protocol_file, "protocol document to check as well");
  verify->add_flag("--schrodinger", cfg.schrodinger, "include the wavefunction propagation suite (slow)");
  verify->add_option("--seed", cfg.seed, "random seed");
  pde(verify);

  auto* schrodinger = app.add_subcommand("schrodinger", "propagate a wavefunction through a protocol");
  common(schrodinger);
  schrodinger->add_option("--horizon", cfg.horizon, "final time for fixed-time protocols");
  pde(schrodinger);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path.empty()) apply_config(app, config_path);
    const CLI::App* sub = app.get_subcommands().front();
    const bool gamma_given = sub->get_option("--gamma")->count() > 0;
    const std::string name = sub->get_name();
    if (name == "unbounded") return cmd_unbounded(cfg);
    if (name == "bounded") return cmd_bounded(cfg);
    if (name == "min-time") return cmd_min_time(cfg);
    if (name == "energy-curve") return cmd_energy_curve(cfg);
    if (name == "pmp") return cmd_pmp(cfg);
    if (name == "verify") return cmd_verify(cfg, gamma_given);
    if (name == "schrodinger") return cmd_schrodinger(cfg, gamma_given);
    return kUsage;
  } catch (const CliError& e) {
    std::cerr << "fcool: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "fcool: " << e.what() << "\n";
    return kRuntime;
  }
}
