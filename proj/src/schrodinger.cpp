#include "fcool/schrodinger.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <variant>

#include "fcool/error.hpp"

namespace fcool {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Normalized Hermite functions phi_0..phi_nmax at xi (ground state exp(-xi^2/2) / pi^(1/4)).
void hermite_functions(double xi, unsigned n_max, std::vector<double>& out) {
  out.assign(n_max + 1, 0.0);
  out[0] = std::exp(-0.5 * xi * xi) / std::sqrt(std::sqrt(std::numbers::pi));
  if (n_max >= 1) out[1] = std::numbers::sqrt2 * xi * out[0];
  for (unsigned k = 1; k < n_max; ++k)
    out[k + 1] = std::sqrt(2.0 / (k + 1.0)) * xi * out[k] - std::sqrt(static_cast<double>(k) / (k + 1.0)) * out[k - 1];
}

void require_same_grid(const GridWavefunction& a, const GridWavefunction& b) {
  if (a.grid().points != b.grid().points || a.grid().half_width != b.grid().half_width)
    fail(ErrorCode::InvalidArgument, "wavefunctions live on different grids");
}

}  // namespace

Grid::Grid(double half_width_, std::size_t points_) : half_width(half_width_), points(points_) {
  if (!(half_width > 0.0)) fail(ErrorCode::InvalidArgument, "grid half-width must be > 0");
  if (points < 2 || (points & (points - 1)) != 0) fail(ErrorCode::InvalidArgument, "grid point count must be a power of two");
}

double Grid::wavenumber(std::size_t j) const noexcept {
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(points) * dx());
  const auto n = static_cast<std::ptrdiff_t>(points);
  auto jj = static_cast<std::ptrdiff_t>(j);
  if (jj >= n / 2) jj -= n;
  return dk * static_cast<double>(jj);
}

GridWavefunction::GridWavefunction(Grid grid, std::vector<Complex> amplitudes, double time)
    : grid_(grid), amplitudes_(std::move(amplitudes)), time_(time) {
  if (amplitudes_.size() != grid_.points) fail(ErrorCode::InvalidArgument, "amplitude count does not match the grid");
}

double GridWavefunction::norm() const noexcept {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s * grid_.dx();
}

void GridWavefunction::normalize() {
  const double n = norm();
  if (!(n > 0.0)) fail(ErrorCode::InvalidArgument, "cannot normalize a zero wavefunction");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& a : amplitudes_) a *= scale;
}

Complex overlap(const GridWavefunction& a, const GridWavefunction& b) {
  require_same_grid(a, b);
  Complex s{0.0, 0.0};
  const auto& pa = a.amplitudes();
  const auto& pb = b.amplitudes();
  for (std::size_t j = 0; j < pa.size(); ++j) s += std::conj(pa[j]) * pb[j];
  return s * a.grid().dx();
}

double fidelity(const GridWavefunction& a, const GridWavefunction& b) { return std::norm(overlap(a, b)); }

void check_resolution(const ModeSpec& spec, const Grid& grid) {
  if (!(spec.omega > 0.0)) fail(ErrorCode::InvalidArgument, "mode frequency must be > 0");
  const double reach = std::sqrt(2.0 * spec.n + 1.0) + 6.0;
  std::ostringstream os;
  if (grid.points < 16u * (spec.n + 1u)) {
    os << "N = " << grid.points << " cannot resolve level " << spec.n << " (needs N >= " << 16 * (spec.n + 1) << ")";
    fail(ErrorCode::Resolution, os.str());
  }
  if (grid.half_width < reach / std::sqrt(spec.omega)) {
    os << "domain half-width " << grid.half_width << " too small for level " << spec.n << " at omega " << spec.omega;
    fail(ErrorCode::Resolution, os.str());
  }
  if (std::numbers::pi / grid.dx() < reach * std::sqrt(spec.omega)) {
    os << "grid spacing " << grid.dx() << " too coarse for level " << spec.n << " at omega " << spec.omega;
    fail(ErrorCode::Resolution, os.str());
  }
}

GridWavefunction eigenstate(const ModeSpec& spec, const Grid& grid) {
  check_resolution(spec, grid);
  std::vector<Complex> amp(grid.points);
  std::vector<double> h;
  const double root = std::sqrt(spec.omega);
  const double scale = std::sqrt(root);
  for (std::size_t j = 0; j < grid.points; ++j) {
    hermite_functions(root * grid.x(j), spec.n, h);
    amp[j] = scale * h[spec.n];
  }
  return GridWavefunction(grid, std::move(amp));
}

GridWavefunction expanding_mode(unsigned n, double b, double bdot, double phase, const Grid& grid) {
  if (!(b > 0.0)) fail(ErrorCode::InvalidArgument, "scaling factor b must be > 0");
  std::vector<Complex> amp(grid.points);
  std::vector<double> h;
  const Complex global = std::polar(1.0 / std::sqrt(b), -(n + 0.5) * phase);
  for (std::size_t j = 0; j < grid.points; ++j) {
    const double x = grid.x(j);
    hermite_functions(x / b, n, h);
    amp[j] = global * h[n] * std::polar(1.0, 0.5 * bdot / b * x * x);
  }
  return GridWavefunction(grid, std::move(amp));
}

std::vector<double> populations(const GridWavefunction& psi, double omega, unsigned n_max) {
  check_resolution({n_max, omega}, psi.grid());
  const Grid& grid = psi.grid();
  std::vector<Complex> sums(n_max + 1, Complex{0.0, 0.0});
  std::vector<double> h;
  const double root = std::sqrt(omega);
  const double scale = std::sqrt(root);
  for (std::size_t j = 0; j < grid.points; ++j) {
    hermite_functions(root * grid.x(j), n_max, h);
    for (unsigned n = 0; n <= n_max; ++n) sums[n] += scale * h[n] * psi.amplitudes()[j];
  }
  std::vector<double> out(n_max + 1);
  for (unsigned n = 0; n <= n_max; ++n) out[n] = std::norm(sums[n] * grid.dx());
  return out;
}

struct SplitStepper::Impl {
  Grid grid;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> half_x2;  // x^2 / 2
  std::vector<double> half_k2;  // k^2 / 2

  double kinetic_dt = std::numeric_limits<double>::quiet_NaN();
  std::vector<Complex> kinetic_phase;

  struct PotentialCache {
    double u = std::numeric_limits<double>::quiet_NaN();
    double dt = std::numeric_limits<double>::quiet_NaN();
    std::vector<Complex> phase;
  };
  std::array<PotentialCache, 2> potential;
  std::size_t next_slot = 0;

  explicit Impl(const Grid& g) : grid(g), half_x2(g.points), half_k2(g.points) {
    const auto n = static_cast<int>(g.points);
    buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * g.points));
    if (!buffer) fail(ErrorCode::Internal, "fftw_malloc failed");
    {
      std::lock_guard lock(planner_mutex());
      forward = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
      backward = fftw_plan_dft_1d(n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (std::size_t j = 0; j < g.points; ++j) {
      const double x = g.x(j);
      const double k = g.wavenumber(j);
      half_x2[j] = 0.5 * x * x;
      half_k2[j] = 0.5 * k * k;
    }
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buffer) fftw_free(buffer);
  }

  Complex* data() { return reinterpret_cast<Complex*>(buffer); }

  const std::vector<Complex>& kinetic(double dt) {
    if (dt != kinetic_dt) {
      kinetic_phase.resize(grid.points);
      for (std::size_t j = 0; j < grid.points; ++j) kinetic_phase[j] = std::polar(1.0, -half_k2[j] * dt);
      kinetic_dt = dt;
    }
    return kinetic_phase;
  }

  // exp(-i u x^2 / 2 * dt)
  const std::vector<Complex>& potential_phase(double u, double dt) {
    for (auto& slot : potential)
      if (slot.u == u && slot.dt == dt) return slot.phase;
    PotentialCache& slot = potential[next_slot];
    next_slot = (next_slot + 1) % potential.size();
    slot.u = u;
    slot.dt = dt;
    slot.phase.resize(grid.points);
    for (std::size_t j = 0; j < grid.points; ++j) slot.phase[j] = std::polar(1.0, -u * half_x2[j] * dt);
    return slot.phase;
  }
};

SplitStepper::SplitStepper(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SplitStepper::~SplitStepper() = default;
SplitStepper::SplitStepper(SplitStepper&&) noexcept = default;
SplitStepper& SplitStepper::operator=(SplitStepper&&) noexcept = default;

void SplitStepper::step(GridWavefunction& psi, double u_start, double u_end, double dt) {
  Impl& m = *impl_;
  const std::size_t n = m.grid.points;
  auto& amp = psi.amplitudes();
  Complex* buf = m.data();
  {
    const auto& half = m.potential_phase(u_start, 0.5 * dt);
    for (std::size_t j = 0; j < n; ++j) buf[j] = amp[j] * half[j];
  }
  fftw_execute(m.forward);
  const auto& kin = m.kinetic(dt);
  for (std::size_t j = 0; j < n; ++j) buf[j] *= kin[j];
  fftw_execute(m.backward);
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto& half = m.potential_phase(u_end, 0.5 * dt);
  for (std::size_t j = 0; j < n; ++j) amp[j] = buf[j] * inv_n * half[j];
  psi.set_time(psi.time() + dt);
}

void SplitStepper::kick(GridWavefunction& psi, double weight) const {
  auto& amp = psi.amplitudes();
  for (std::size_t j = 0; j < amp.size(); ++j) amp[j] *= std::polar(1.0, -weight * impl_->half_x2[j]);
}

double SplitStepper::kinetic_energy(const GridWavefunction& psi) {
  Impl& m = *impl_;
  Complex* buf = m.data();
  const auto& amp = psi.amplitudes();
  for (std::size_t j = 0; j < amp.size(); ++j) buf[j] = amp[j];
  fftw_execute(m.forward);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const double w = std::norm(buf[j]);
    num += m.half_k2[j] * w;
    den += w;
  }
  return num / den;
}

double SplitStepper::potential_energy(const GridWavefunction& psi, double u) const {
  double num = 0.0, den = 0.0;
  const auto& amp = psi.amplitudes();
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const double w = std::norm(amp[j]);
    num += impl_->half_x2[j] * w;
    den += w;
  }
  return u * num / den;
}

namespace {

struct PdeSegment {
  enum class Kind { Constant, Singular, Kick } kind;
  double value = 0.0;  // u for Constant, weight for Kick
  double duration = 0.0;
  std::size_t source = 0;
};

std::vector<PdeSegment> lower(const Protocol& protocol, const PropagationConfig& cfg) {
  std::vector<PdeSegment> out;
  for (std::size_t i = 0; i < protocol.segments().size(); ++i) {
    const auto& seg = protocol.segments()[i];
    if (const auto* imp = std::get_if<Impulse>(&seg)) {
      if (cfg.impulse_mode == ImpulseMode::ExactKick)
        out.push_back({PdeSegment::Kind::Kick, imp->weight, 0.0, i});
      else
        out.push_back({PdeSegment::Kind::Constant, imp->weight / cfg.pulse_width, cfg.pulse_width, i});
    } else if (const auto* bang = std::get_if<Bang>(&seg)) {
      out.push_back({PdeSegment::Kind::Constant, bang->u, bang->duration, i});
    } else {
      out.push_back({PdeSegment::Kind::Singular, 0.0, std::get<Singular>(seg).duration, i});
    }
  }
  return out;
}

double outer_mass(const GridWavefunction& psi, double fraction) {
  const std::size_t n = psi.grid().points;
  const auto band = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  double s = 0.0;
  for (std::size_t j = 0; j < band && j < n; ++j) s += std::norm(psi.amplitudes()[j]) + std::norm(psi.amplitudes()[n - 1 - j]);
  return s * psi.grid().dx();
}

}  // namespace

ClassicalState advance_classical(const ClassicalState& cs, bool singular, double u, double dt) {
  using Y = std::array<double, 3>;
  auto control = [&](double x1) { return singular ? singular_feedback(x1) : u; };
  auto rhs = [&](const Y& y) {
    const auto [d1, d2] = state_derivative({y[0], y[1]}, control(y[0]));
    return Y{d1, d2, 1.0 / (y[0] * y[0])};
  };
  auto axpy = [](const Y& y, const Y& k, double h) { return Y{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]}; };
  const Y y{cs.state.x1, cs.state.x2, cs.phase};
  const Y k1 = rhs(y);
  const Y k2 = rhs(axpy(y, k1, 0.5 * dt));
  const Y k3 = rhs(axpy(y, k2, 0.5 * dt));
  const Y k4 = rhs(axpy(y, k3, dt));
  ClassicalState out = cs;
  out.state = {y[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
               y[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
  out.phase = y[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
  out.t = cs.t + dt;
  out.u = control(out.state.x1);
  return out;
}

PropagationResult propagate(const GridWavefunction& psi0, const CoolingProblem& problem, const Protocol& protocol,
                            const PropagationConfig& cfg, const PropagationObserver& observer) {
  const Grid& grid = psi0.grid();
  if (grid.half_width < 8.0 * problem.gamma()) {
    std::ostringstream os;
    os << "grid half-width " << grid.half_width << " cannot hold an expansion by gamma = " << problem.gamma()
       << " (needs L >= 8 gamma)";
    fail(ErrorCode::Resolution, os.str());
  }
  if (cfg.impulse_mode == ImpulseMode::RectangularPulse && !(cfg.pulse_width > 0.0))
    fail(ErrorCode::InvalidArgument, "pulse width must be > 0");
  protocol.check_matches(problem);

  const std::vector<PdeSegment> segments = lower(protocol, cfg);
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  const std::size_t total_steps = cfg.steps > 0 ? cfg.steps : 200'000;

  PropagationResult result{psi0, {}, 0.0, 0};
  GridWavefunction& psi = result.psi;
  ClassicalState& cl = result.classical;
  cl.t = psi.time();
  cl.state = kInitialState;
  for (const auto& s : segments)
    if (s.kind != PdeSegment::Kind::Kick) {
      cl.u = s.kind == PdeSegment::Kind::Constant ? s.value : singular_feedback(1.0);
      break;
    }
  const double norm0 = psi.norm();
  SplitStepper stepper(grid);

  auto check_boundary = [&] {
    const double mass = outer_mass(psi, cfg.boundary_fraction);
    if (mass > cfg.boundary_mass) {
      std::ostringstream os;
      os << "wavepacket mass " << mass << " reached the outer grid band at t = " << cl.t;
      fail(ErrorCode::Boundary, os.str());
    }
    result.max_norm_drift = std::max(result.max_norm_drift, std::abs(psi.norm() - norm0));
  };

  if (observer) observer(psi, cl);
  std::size_t global = 0;
  for (const auto& seg : segments) {
    cl.segment = seg.source;
    if (seg.kind == PdeSegment::Kind::Kick) {
      stepper.kick(psi, seg.value);
      cl.state = apply_impulse(cl.state, seg.value);
      continue;
    }
    if (seg.duration <= 0.0) continue;
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(total_steps) * seg.duration / total)));
    const double dt = seg.duration / static_cast<double>(n);
    const bool singular = seg.kind == PdeSegment::Kind::Singular;
    const double t_start = cl.t;
    for (std::size_t k = 1; k <= n; ++k) {
      const double u0 = singular ? singular_feedback(cl.state.x1) : seg.value;
      cl = advance_classical(cl, singular, seg.value, dt);
      const double u1 = cl.u;
      stepper.step(psi, u0, u1, dt);
      cl.t = t_start + static_cast<double>(k) * dt;
      psi.set_time(cl.t);
      ++global;
      if (cfg.boundary_check_every > 0 && global % cfg.boundary_check_every == 0) check_boundary();
      if (observer && cfg.observe_every > 0 && global % cfg.observe_every == 0) observer(psi, cl);
    }
  }
  check_boundary();
  result.steps = global;
  if (observer && (cfg.observe_every == 0 || global % cfg.observe_every != 0)) observer(psi, cl);
  return result;
}

}  // namespace fcool
