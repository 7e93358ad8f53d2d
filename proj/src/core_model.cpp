#include "fcool/core_model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "fcool/error.hpp"

namespace fcool {

namespace {

constexpr double kHorizonSnap = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

CoolingProblem::CoolingProblem(double gamma, std::optional<double> horizon, BoundMode bound_mode)
    : gamma_(gamma), horizon_(horizon), bound_mode_(bound_mode) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    std::ostringstream os;
    os << "gamma must be finite and > 1, got " << gamma;
    fail(ErrorCode::InvalidArgument, os.str());
  }
  if (horizon && (!(*horizon > 0.0) || !std::isfinite(*horizon))) {
    std::ostringstream os;
    os << "horizon must be finite and > 0, got " << *horizon;
    fail(ErrorCode::InvalidArgument, os.str());
  }
}

AdjointState::AdjointState(double lambda0, double lambda1, double lambda2)
    : lambda0_(lambda0), lambda1_(lambda1), lambda2_(lambda2) {
  if (lambda0 > 0.0) fail(ErrorCode::InvalidArgument, "lambda0 must be <= 0");
  if (lambda0 == 0.0 && lambda1 == 0.0 && lambda2 == 0.0)
    fail(ErrorCode::MaximumPrinciple, "multiplier vector (lambda0, lambda1, lambda2) must be nonzero");
}

double duration_of(const ControlSegment& segment) noexcept {
  return std::visit(overloaded{[](const Impulse&) { return 0.0; },
                               [](const Bang& b) { return b.duration; },
                               [](const Singular& s) { return s.duration; }},
                    segment);
}

double singular_feedback(double x1) {
  const double sq = x1 * x1;
  return 2.0 / (sq * sq);
}

double control_value(const ControlSegment& segment, const State& s) {
  return std::visit(overloaded{[](const Impulse&) -> double {
                                 fail(ErrorCode::InvalidArgument, "impulse has no finite control value");
                               },
                               [](const Bang& b) { return b.u; },
                               [&](const Singular&) { return singular_feedback(s.x1); }},
                    segment);
}

Protocol::Protocol(std::vector<ControlSegment> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_) validate(s);
}

void Protocol::validate(const ControlSegment& segment) {
  std::visit(overloaded{[](const Impulse& i) {
                          if (!std::isfinite(i.weight))
                            fail(ErrorCode::InvalidArgument, "impulse weight must be finite");
                        },
                        [](const Bang& b) {
                          if (b.u != 1.0 && b.u != -1.0)
                            fail(ErrorCode::InvalidArgument, "bang control must be -1 or +1");
                          if (!(b.duration >= 0.0) || !std::isfinite(b.duration))
                            fail(ErrorCode::InvalidArgument, "bang duration must be finite and >= 0");
                        },
                        [](const Singular& s) {
                          if (!(s.duration >= 0.0) || !std::isfinite(s.duration))
                            fail(ErrorCode::InvalidArgument, "singular duration must be finite and >= 0");
                        }},
             segment);
}

Protocol& Protocol::impulse(double weight) {
  ControlSegment s = Impulse{weight};
  validate(s);
  segments_.push_back(s);
  return *this;
}

Protocol& Protocol::bang(double u, double duration) {
  ControlSegment s = Bang{u, duration};
  validate(s);
  segments_.push_back(s);
  return *this;
}

Protocol& Protocol::singular(double duration) {
  ControlSegment s = Singular{duration};
  validate(s);
  segments_.push_back(s);
  return *this;
}

bool Protocol::has_impulses() const noexcept {
  for (const auto& s : segments_)
    if (std::holds_alternative<Impulse>(s)) return true;
  return false;
}

double Protocol::total_duration() const noexcept {
  double total = 0.0;
  for (const auto& s : segments_) total += duration_of(s);
  return total;
}

std::vector<double> Protocol::end_times(std::optional<double> horizon) const {
  std::vector<double> ends;
  ends.reserve(segments_.size());
  double t = 0.0;
  for (const auto& s : segments_) {
    t += duration_of(s);
    ends.push_back(t);
  }
  if (horizon && !ends.empty() && std::abs(ends.back() - *horizon) <= kHorizonSnap * std::max(1.0, *horizon)) {
    const double old_end = ends.back();
    for (auto& e : ends)
      if (e == old_end) e = *horizon;
  }
  return ends;
}

void Protocol::check_matches(const CoolingProblem& problem) const {
  if (!problem.horizon()) return;
  const double T = *problem.horizon();
  const double total = total_duration();
  if (std::abs(total - T) > kHorizonSnap * std::max(1.0, T)) {
    std::ostringstream os;
    os.precision(17);
    os << "protocol duration " << total << " does not match horizon " << T;
    fail(ErrorCode::InvalidArgument, os.str());
  }
}

std::pair<double, double> state_derivative(const State& s, double u) {
  if (!(s.x1 > 0.0)) {
    std::ostringstream os;
    os << "x1 = " << s.x1 << " left the region x1 > 0";
    fail(ErrorCode::Domain, os.str());
  }
  const double inv = 1.0 / s.x1;
  return {s.x2, -u * s.x1 + inv * inv * inv};
}

State apply_impulse(const State& s, double weight) noexcept { return {s.x1, s.x2 - weight * s.x1}; }

double instantaneous_energy(const State& s, double u, unsigned n) noexcept {
  return (2.0 * n + 1.0) / 4.0 * (s.x2 * s.x2 + u * s.x1 * s.x1 + 1.0 / (s.x1 * s.x1));
}

double to_physical_energy(double rescaled, unsigned n, double hbar, double omega0) noexcept {
  return rescaled * (n + 0.5) * hbar * omega0;
}

}  // namespace fcool
