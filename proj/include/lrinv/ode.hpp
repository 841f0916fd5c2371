#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lrinv/errors.hpp"

namespace lrinv {

struct SolverConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_steps = 2'000'000;
  double initial_step = 0.0;  // 0 = pick automatically
  double max_step = 0.0;      // 0 = unlimited
};

/// Accepted steps of an ODE solve plus a C1 interpolant.
///
/// Interpolation is cubic Hermite on each accepted interval, built from the
/// stored state and derivative at both ends. For a 5th-order integrator run
/// at tight tolerances the interpolation error (~h^4 within a step) is the
/// accuracy floor, so callers that need more resolution at specific points
/// should land steps there instead (see integrate_dopri5's `stops`).
template <std::size_t N>
class OdeTable {
 public:
  using State = std::array<double, N>;

  OdeTable(std::vector<double> t, std::vector<State> y, std::vector<State> dy)
      : t_(std::move(t)), y_(std::move(y)), dy_(std::move(dy)) {}

  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  std::size_t size() const { return t_.size(); }
  const std::vector<double>& times() const { return t_; }
  const State& state(std::size_t i) const { return y_[i]; }

  State eval(double t) const {
    if (t < t_.front() - 1e-12 || t > t_.back() + 1e-12) {
      throw SolverError("interpolation time " + std::to_string(t) + " outside solved range [" +
                        std::to_string(t_.front()) + ", " + std::to_string(t_.back()) + "]");
    }
    t = std::clamp(t, t_.front(), t_.back());
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(it - t_.begin(), 1), t_.size() - 1);
    const std::size_t lo = hi - 1;
    const double h = t_[hi] - t_[lo];
    if (h <= 0.0) return y_[lo];
    const double s = (t - t_[lo]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    State out{};
    for (std::size_t k = 0; k < N; ++k) {
      out[k] = h00 * y_[lo][k] + h10 * h * dy_[lo][k] + h01 * y_[hi][k] + h11 * h * dy_[hi][k];
    }
    return out;
  }

 private:
  std::vector<double> t_;
  std::vector<State> y_;
  std::vector<State> dy_;
};

namespace detail {

template <std::size_t N>
double error_norm(const std::array<double, N>& e, const std::array<double, N>& y,
                  const std::array<double, N>& ynew, const SolverConfig& cfg) {
  double acc = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[k]), std::abs(ynew[k]));
    const double r = e[k] / scale;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

}  // namespace detail

/// Dormand–Prince 5(4) with FSAL and PI-free step control. `rhs(t, y, dydt)`
/// fills the derivative. Integration runs from t0 to t1 (t1 > t0) and lands
/// exactly on every time in `stops` (must be sorted, within [t0, t1]), so
/// tabulated output needs no interpolation at those points.
template <std::size_t N, typename Rhs>
OdeTable<N> integrate_dopri5(Rhs&& rhs, double t0, double t1, std::array<double, N> y0,
                             const SolverConfig& cfg = {},
                             const std::vector<double>& stops = {}) {
  using State = std::array<double, N>;
  if (!(t1 > t0)) throw SolverError("integration interval is empty");

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const auto call = [&rhs](double t, const State& y, State& dydt) {
    rhs(t, y, dydt);
    for (double v : dydt) {
      if (!std::isfinite(v)) {
        throw SolverError("right-hand side returned a non-finite value at t=" + std::to_string(t));
      }
    }
  };

  std::vector<double> ts;
  std::vector<State> ys, dys;
  ts.push_back(t0);
  ys.push_back(y0);

  State k1{};
  call(t0, y0, k1);
  dys.push_back(k1);

  double h = cfg.initial_step;
  if (h <= 0.0) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[k]);
      d0 += (y0[k] / sc) * (y0[k] / sc);
      d1 += (k1[k] / sc) * (k1[k] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
    h = std::min(h, (t1 - t0) / 10.0);
  }
  if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);

  std::size_t next_stop = 0;
  double t = t0;
  State y = y0;
  State k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ynew{}, err{}, ytmp{};

  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    if (t >= t1) break;
    while (next_stop < stops.size() && stops[next_stop] <= t + 1e-14 * std::max(1.0, std::abs(t))) {
      ++next_stop;
    }
    double h_cap = t1 - t;
    if (next_stop < stops.size()) h_cap = std::min(h_cap, stops[next_stop] - t);
    if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
    const double h_try = std::min(h, h_cap);
    if (h_try < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw SolverError("step size underflow at t=" + std::to_string(t));
    }

    for (std::size_t k = 0; k < N; ++k) ytmp[k] = y[k] + h_try * a21 * k1[k];
    call(t + c2 * h_try, ytmp, k2);
    for (std::size_t k = 0; k < N; ++k) ytmp[k] = y[k] + h_try * (a31 * k1[k] + a32 * k2[k]);
    call(t + c3 * h_try, ytmp, k3);
    for (std::size_t k = 0; k < N; ++k) {
      ytmp[k] = y[k] + h_try * (a41 * k1[k] + a42 * k2[k] + a43 * k3[k]);
    }
    call(t + c4 * h_try, ytmp, k4);
    for (std::size_t k = 0; k < N; ++k) {
      ytmp[k] = y[k] + h_try * (a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k]);
    }
    call(t + c5 * h_try, ytmp, k5);
    for (std::size_t k = 0; k < N; ++k) {
      ytmp[k] = y[k] + h_try * (a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] +
                                a65 * k5[k]);
    }
    call(t + h_try, ytmp, k6);
    for (std::size_t k = 0; k < N; ++k) {
      ynew[k] = y[k] + h_try * (b1 * k1[k] + b3 * k3[k] + b4 * k4[k] + b5 * k5[k] + b6 * k6[k]);
    }
    call(t + h_try, ynew, k7);  // FSAL stage
    for (std::size_t k = 0; k < N; ++k) {
      err[k] = h_try * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] +
                        e7 * k7[k]);
    }

    const double norm = detail::error_norm(err, y, ynew, cfg);
    if (norm <= 1.0) {
      t += h_try;
      y = ynew;
      k1 = k7;
      ts.push_back(t);
      ys.push_back(y);
      dys.push_back(k1);
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(norm, 1e-16), -0.2), 0.2, 10.0);
    h = h_try * fac;
  }

  if (t < t1) {
    throw SolverError("integrator exceeded " + std::to_string(cfg.max_steps) +
                      " steps before reaching t=" + std::to_string(t1));
  }
  return OdeTable<N>(std::move(ts), std::move(ys), std::move(dys));
}

}  // namespace lrinv
