#pragma once

// Split-operator propagation of the trapped-particle wavefunction in rescaled
// units (hbar = m = omega0 = 1): i psi_t = -psi_xx / 2 + u(t) x^2 psi / 2.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "fcool/core_model.hpp"

namespace fcool {

using Complex = std::complex<double>;

/// Uniform periodic grid x_j = -L + j dx, dx = 2L / N.
struct Grid {
  double half_width = 30.0;
  std::size_t points = 4096;

  Grid() = default;
  Grid(double half_width, std::size_t points);

  double dx() const noexcept { return 2.0 * half_width / static_cast<double>(points); }
  double x(std::size_t j) const noexcept { return -half_width + static_cast<double>(j) * dx(); }
  double wavenumber(std::size_t j) const noexcept;
};

class GridWavefunction {
 public:
  GridWavefunction(Grid grid, std::vector<Complex> amplitudes, double time = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
  std::vector<Complex>& amplitudes() noexcept { return amplitudes_; }
  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  /// Trapezoid (periodic) quadrature of |psi|^2.
  double norm() const noexcept;
  void normalize();

 private:
  Grid grid_;
  std::vector<Complex> amplitudes_;
  double time_ = 0.0;
};

/// <a|b> on the common grid.
Complex overlap(const GridWavefunction& a, const GridWavefunction& b);
/// |<a|b>|^2.
double fidelity(const GridWavefunction& a, const GridWavefunction& b);

struct ModeSpec {
  unsigned n = 0;
  double omega = 1.0;
};

/// Throws ErrorCode::Resolution unless N >= 16 (n+1) and the mode fits the
/// domain and the Nyquist band.
void check_resolution(const ModeSpec& spec, const Grid& grid);

/// Normalized oscillator eigenfunction of frequency omega (Hermite recurrence).
GridWavefunction eigenstate(const ModeSpec& spec, const Grid& grid);

/// Expanding mode of level n for scaling data (b, bdot) and accumulated
/// phase integral of 1/b^2.
GridWavefunction expanding_mode(unsigned n, double b, double bdot, double phase, const Grid& grid);

/// |c_n|^2 against eigenstate(n, omega), n = 0..n_max.
std::vector<double> populations(const GridWavefunction& psi, double omega, unsigned n_max);

/// Second-order Strang stepper exp(-iV dt/2) exp(-iK dt) exp(-iV dt/2). The
/// potential half-steps use the control at the start and the end of the step.
class SplitStepper {
 public:
  explicit SplitStepper(const Grid& grid);
  ~SplitStepper();
  SplitStepper(SplitStepper&&) noexcept;
  SplitStepper& operator=(SplitStepper&&) noexcept;
  SplitStepper(const SplitStepper&) = delete;
  SplitStepper& operator=(const SplitStepper&) = delete;

  void step(GridWavefunction& psi, double u_start, double u_end, double dt);

  /// Exact propagator of a Dirac impulse of weight w: psi *= exp(-i w x^2 / 2).
  void kick(GridWavefunction& psi, double weight) const;

  double kinetic_energy(const GridWavefunction& psi);
  double potential_energy(const GridWavefunction& psi, double u) const;
  double energy(const GridWavefunction& psi, double u) { return kinetic_energy(psi) + potential_energy(psi, u); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class ImpulseMode { ExactKick, RectangularPulse };

struct PropagationConfig {
  /// Total Strang steps over the horizon; 0 selects 2e5.
  std::size_t steps = 0;
  ImpulseMode impulse_mode = ImpulseMode::ExactKick;
  /// Width tau of the rectangular pulse w / tau replacing an impulse. The pulse
  /// is inserted, so the propagated horizon grows by tau per impulse.
  double pulse_width = 1e-3;
  /// Mass allowed in the outer `boundary_fraction` of the domain on either side.
  double boundary_fraction = 1.0 / 16.0;
  double boundary_mass = 1e-6;
  std::size_t boundary_check_every = 100;
  /// Observer cadence in steps; 0 calls the observer only at the start and end.
  std::size_t observe_every = 0;
};

/// Classical scaling data co-integrated with the wavefunction (RK4 on the
/// Ermakov system at the propagation step).
struct ClassicalState {
  double t = 0.0;
  State state;
  double phase = 0.0;
  double u = 1.0;
  std::size_t segment = 0;
};

/// One RK4 step of (x1, x2, phase) under a constant control or the singular feedback.
ClassicalState advance_classical(const ClassicalState& cs, bool singular, double u, double dt);

using PropagationObserver = std::function<void(const GridWavefunction&, const ClassicalState&)>;

struct PropagationResult {
  GridWavefunction psi;
  ClassicalState classical;
  double max_norm_drift = 0.0;
  std::size_t steps = 0;
};

/// Propagates psi through the protocol. Requires L >= 8 gamma; raises
/// ErrorCode::Boundary if the wavepacket reaches the outer band of the grid.
PropagationResult propagate(const GridWavefunction& psi, const CoolingProblem& problem, const Protocol& protocol,
                            const PropagationConfig& cfg = {}, const PropagationObserver& observer = {});

}  // namespace fcool
