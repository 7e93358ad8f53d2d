#pragma once

// Shared problem, state and protocol types. Everything is expressed in
// rescaled oscillator units: hbar = m = omega0 = 1 and t = omega0 * t_phys.

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace fcool {

enum class BoundMode { Unbounded, SymmetricUnit };

class CoolingProblem {
 public:
  /// gamma = sqrt(omega0 / omegaT) > 1; horizon (rescaled final time) > 0 when present.
  CoolingProblem(double gamma, std::optional<double> horizon = std::nullopt,
                 BoundMode bound_mode = BoundMode::Unbounded);

  double gamma() const noexcept { return gamma_; }
  const std::optional<double>& horizon() const noexcept { return horizon_; }
  BoundMode bound_mode() const noexcept { return bound_mode_; }

  /// Final trap frequency omegaT / omega0 = 1 / gamma^2.
  double final_frequency() const noexcept { return 1.0 / (gamma_ * gamma_); }

 private:
  double gamma_;
  std::optional<double> horizon_;
  BoundMode bound_mode_;
};

/// Phase-plane point (x1, x2) = (b, bdot / omega0).
struct State {
  double x1 = 1.0;
  double x2 = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

inline constexpr State kInitialState{1.0, 0.0};

/// Costate of the control Hamiltonian. lambda0 <= 0 is the cost multiplier.
class AdjointState {
 public:
  AdjointState(double lambda0, double lambda1, double lambda2);

  double lambda0() const noexcept { return lambda0_; }
  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }

 private:
  double lambda0_;
  double lambda1_;
  double lambda2_;
};

struct Impulse {
  /// Integral of u over the Dirac pulse; x2 jumps by -weight * x1.
  double weight = 0.0;
};

struct Bang {
  double u = 1.0;  // -1 or +1
  double duration = 0.0;
};

/// Singular arc: control is the state feedback u = 2 / x1^4.
struct Singular {
  double duration = 0.0;
};

using ControlSegment = std::variant<Impulse, Bang, Singular>;

double duration_of(const ControlSegment& segment) noexcept;

/// Control value of a smooth segment at state s. Impulses have no finite value.
double control_value(const ControlSegment& segment, const State& s);

double singular_feedback(double x1);

class Protocol {
 public:
  Protocol() = default;
  explicit Protocol(std::vector<ControlSegment> segments);

  Protocol& impulse(double weight);
  Protocol& bang(double u, double duration);
  Protocol& singular(double duration);

  const std::vector<ControlSegment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  bool has_impulses() const noexcept;

  double total_duration() const noexcept;

  /// Segment end times as prefix sums. With a horizon, the last end time is
  /// snapped onto it when within 1e-12.
  std::vector<double> end_times(std::optional<double> horizon = std::nullopt) const;

  /// Throws InvalidArgument unless the durations add up to the horizon within 1e-12 (relative).
  void check_matches(const CoolingProblem& problem) const;

 private:
  static void validate(const ControlSegment& segment);

  std::vector<ControlSegment> segments_;
};

struct Sample {
  double t = 0.0;
  State state;
  double u = 0.0;
  double running_cost = 0.0;  // J accumulated up to t
  double phase = 0.0;         // integral of 1 / x1^2 up to t
  std::size_t segment = 0;    // index of the protocol segment that produced the sample
};

struct ImpulseEvent {
  double t = 0.0;
  std::size_t segment = 0;
  State before;
  State after;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<ImpulseEvent> impulses;
  double cost_J = 0.0;
  double horizon = 0.0;

  /// Time-averaged energy 2 J / T in units of (n + 1/2) hbar omega0; zero for an empty horizon.
  double average_energy() const noexcept { return horizon > 0.0 ? 2.0 * cost_J / horizon : 0.0; }
  const Sample& final_sample() const { return samples.back(); }
};

/// Right-hand side of the rescaled Ermakov system: (x2, -u x1 + 1 / x1^3).
std::pair<double, double> state_derivative(const State& s, double u);

/// Integrates the velocity equation across a Dirac impulse of the given weight.
State apply_impulse(const State& s, double weight) noexcept;

/// Energy of mode n under H(t) from (x1, x2, u): (2n+1)/4 [x2^2 + u x1^2 + 1/x1^2].
double instantaneous_energy(const State& s, double u, unsigned n = 0) noexcept;

/// Converts a dimensionless energy (units of (n + 1/2) hbar omega0) to physical units.
double to_physical_energy(double rescaled, unsigned n, double hbar, double omega0) noexcept;

/// Converts rescaled time to physical time t_phys = t / omega0.
inline double to_physical_time(double rescaled, double omega0) noexcept { return rescaled / omega0; }

}  // namespace fcool
