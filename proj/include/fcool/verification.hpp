#pragma once

// Check suites shared by the `verify`, `pmp` and `schrodinger` commands. Each
// check carries the measured value and the threshold it was held to.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcool/ermakov_sim.hpp"
#include "fcool/schrodinger.hpp"
#include "fcool/serialization.hpp"

namespace fcool {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const noexcept;
};

SuiteReport unbounded_suite(double gamma, const IntegratorConfig& cfg = {});
SuiteReport bounded_suite(double gamma, const IntegratorConfig& cfg = {});
SuiteReport ermakov_suite(double gamma);
SuiteReport pmp_suite(double gamma, std::uint64_t seed = 1);
SuiteReport protocol_suite(const Document& doc, const IntegratorConfig& cfg = {});

enum class SchrodingerProtocol { BangBang, BangSingularBang, Unbounded };

struct SchrodingerOptions {
  double gamma = 3.0;
  unsigned level = 0;
  std::size_t points = 4096;
  double half_width = 0.0;  // 0 selects 10 gamma
  std::size_t steps = 0;    // 0 selects 2e5
  SchrodingerProtocol protocol = SchrodingerProtocol::BangBang;
  double horizon = 0.0;  // required for the fixed-time protocols
  ImpulseMode impulse_mode = ImpulseMode::ExactKick;
  unsigned n_max = 6;
  std::size_t checkpoints = 10;
  std::vector<double> snapshot_times;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> x;
  std::vector<Complex> psi;
};

struct SchrodingerRun {
  SchrodingerOptions options;
  double horizon = 0.0;
  std::size_t steps = 0;
  double final_fidelity = 0.0;  // against eigenstate(level, 1/gamma^2)
  std::vector<double> initial_populations;
  std::vector<double> final_populations;
  double max_norm_drift = 0.0;
  /// max |<H>_grid - E(t)| / (|x2^2| + |u| x1^2 + 1/x1^2) (2n+1)/4 over checkpoints
  double max_energy_error = 0.0;
  double min_mode_fidelity = 1.0;     // propagated psi vs expanding mode at checkpoints
  double max_step_infidelity = 0.0;   // one step applied to an expanding mode
  State final_classical;
  std::vector<Snapshot> snapshots;
};

SchrodingerRun run_schrodinger(const SchrodingerOptions& options);
SuiteReport schrodinger_suite(const SchrodingerRun& run);

/// 1 - |<step(mode(t))|mode(t + dt)>|^2 for the expanding mode of `level`
/// seeded from `classical`, stepping under control law u(x1).
double expanding_mode_step_infidelity(SplitStepper& stepper, const Grid& grid, unsigned level,
                                      const ClassicalState& classical, bool singular, double u, double dt);

struct VerifyOptions {
  double gamma = 10.0;
  IntegratorConfig integrator;
  std::optional<Document> protocol;
  bool schrodinger = false;
  SchrodingerOptions schrodinger_options;
  std::uint64_t seed = 1;
};

std::vector<SuiteReport> run_verification(const VerifyOptions& options);
bool all_passed(const std::vector<SuiteReport>& suites) noexcept;

std::string suites_json(const std::vector<SuiteReport>& suites);
std::string schrodinger_json(const SchrodingerRun& run, const SuiteReport& suite);
std::string snapshots_csv(const SchrodingerRun& run);

struct PmpReportOptions {
  double gamma = 10.0;
  std::optional<double> horizon;  // defaults to the free-time optimum
  std::size_t samples = 100;
  std::uint64_t seed = 1;
};

/// Determinants at sampled states, hyperbolicity verdict, conjugate scan and
/// Hamiltonian drift as one JSON document. Sets `passed` when all hold.
std::string pmp_report(const PmpReportOptions& options, bool& passed);

}  // namespace fcool
