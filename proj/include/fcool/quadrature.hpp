#pragma once

#include <cmath>
#include <functional>

#include "fcool/error.hpp"

namespace fcool {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) fail(ErrorCode::Convergence, "adaptive Simpson exceeded its recursion depth");
  if (std::abs(delta) <= 15.0 * tol || (m - a) <= 1e-14 * std::max(1.0, std::abs(a)))
    return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance `tol` on [a, b].
/// The interval is pre-split into `pieces` panels so that narrow features do
/// not escape the first refinement.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int pieces = 16, int max_depth = 50) {
  if (b == a) return 0.0;
  double total = 0.0;
  const double width = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * width;
    const double hi = (k + 1 == pieces) ? b : lo + width;
    const double m = 0.5 * (lo + hi);
    const double flo = f(lo), fhi = f(hi), fm = f(m);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += detail::simpson_step(f, lo, flo, hi, fhi, m, fm, whole, tol / pieces, max_depth);
  }
  return total;
}

}  // namespace fcool
