#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "lrinv/errors.hpp"

namespace lrinv {

namespace detail {

inline double quad_mag(double v) { return std::abs(v); }
inline double quad_mag(const std::complex<double>& v) { return std::abs(v); }

template <typename T, typename F>
T simpson_recurse(F& f, double a, double m, double b, T fa, T fm, T fb, T whole, double tol,
                  int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T sum = left + right;
  if (depth <= 0) throw SolverError("quadrature recursion limit hit on [" + std::to_string(a) +
                                    ", " + std::to_string(b) + "]");
  if (quad_mag(sum - whole) <= 15.0 * tol) {
    return sum + (sum - whole) / 15.0;  // Richardson tail
  }
  return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integration of a double- or complex-valued integrand.
/// `max_panel` (when positive) caps the width of the initial panels, which
/// keeps oscillatory integrands from fooling the first error estimate.
template <typename T, typename F>
T adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 60,
                   double max_panel = 0.0) {
  if (a == b) return T{};
  if (b < a) return -adaptive_simpson<T>(f, b, a, tol, max_depth, max_panel);

  std::size_t panels = 1;
  if (max_panel > 0.0) {
    panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
    if (panels == 0) panels = 1;
  }
  const double w = (b - a) / static_cast<double>(panels);
  const double panel_tol = tol / static_cast<double>(panels);

  T total{};
  for (std::size_t i = 0; i < panels; ++i) {
    const double pa = a + w * static_cast<double>(i);
    const double pb = (i + 1 == panels) ? b : pa + w;
    const double pm = 0.5 * (pa + pb);
    const T fa = f(pa);
    const T fm = f(pm);
    const T fb = f(pb);
    const T whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_recurse<T>(f, pa, pm, pb, fa, fm, fb, whole, panel_tol, max_depth);
  }
  return total;
}

/// Fixed-grid composite Simpson over `panels` equal panels (each panel uses
/// the midpoint, so 2*panels+1 evaluations). Error is O(h^4); exposed so the
/// convergence order is measurable against the adaptive routine.
template <typename T, typename F>
T composite_simpson(F&& f, double a, double b, std::size_t panels) {
  if (panels == 0) throw SolverError("composite_simpson needs at least one panel");
  if (a == b) return T{};
  const double w = (b - a) / static_cast<double>(panels);
  T total{};
  for (std::size_t i = 0; i < panels; ++i) {
    const double pa = a + w * static_cast<double>(i);
    const double pb = (i + 1 == panels) ? b : pa + w;
    total += (pb - pa) / 6.0 * (f(pa) + 4.0 * f(0.5 * (pa + pb)) + f(pb));
  }
  return total;
}

}  // namespace lrinv
