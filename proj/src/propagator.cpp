#include "lrinv/propagator.hpp"

#include <cmath>
#include <string>

namespace lrinv {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

PropagatorStep PropagatorStep::compose(const PropagatorStep& later, const PropagatorStep& earlier) {
  PropagatorStep out;
  out.t = later.t;
  out.a_qq = later.a_qq * earlier.a_qq + later.a_qp * earlier.a_pq;
  out.a_qp = later.a_qq * earlier.a_qp + later.a_qp * earlier.a_pp;
  out.a_pq = later.a_pq * earlier.a_qq + later.a_pp * earlier.a_pq;
  out.a_pp = later.a_pq * earlier.a_qp + later.a_pp * earlier.a_pp;
  out.c_q = later.a_qq * earlier.c_q + later.a_qp * earlier.c_p + later.c_q;
  out.c_p = later.a_pq * earlier.c_q + later.a_pp * earlier.c_p + later.c_p;
  return out;
}

PropagatorStep step_from_scalars(const FramePoint& origin, const FramePoint& now, double omega_inv,
                                 double theta, std::complex<double> f_cal, double t) {
  const double gm0 = origin.g_minus;
  const double gz0 = origin.g_zero;
  const double gm = now.g_minus;
  const double gz = now.g_zero;
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  PropagatorStep out;
  out.t = t;
  out.a_qq = std::sqrt(gm / gm0) * (c + (gz0 / omega_inv) * s);
  out.a_qp = std::sqrt(gm * gm0) * s / omega_inv;
  out.a_pq = ((gz0 - gz) * c - (omega_inv + gz0 * gz / omega_inv) * s) / std::sqrt(gm * gm0);
  out.a_pp = std::sqrt(gm0 / gm) * (c - (gz / omega_inv) * s);
  out.c_q = std::sqrt(2.0 * gm / omega_inv) * f_cal.real();
  out.c_p = std::sqrt(2.0 * omega_inv / gm) * (f_cal.imag() - (gz / omega_inv) * f_cal.real());
  return out;
}

PropagatorStep step(const InvariantFrame& frame, const DriftState& drift, double t) {
  return step_from_scalars(frame.at(drift.origin()), frame.at(t), frame.omega_inv(),
                           drift.theta(t), drift.f_cal(t), t);
}

BogoliubovPair bogoliubov(const InvariantFrame& frame, const OscillatorModel& model, double t) {
  const double w2 = model.omega_sq(t);
  if (!(w2 > 0.0)) {
    throw SolverError("instantaneous frequency squared is non-positive at t=" + std::to_string(t) +
                      "; the Hamiltonian ladder pair is undefined there");
  }
  const double w = std::sqrt(w2);
  const FramePoint g = frame.at(t);
  const double wi = frame.omega_inv();
  const double r = std::sqrt(model.mass(t) * g.g_minus * w / wi);
  const std::complex<double> z = (1.0 + kI * (g.g_zero / wi)) / r;
  return {0.5 * (r + z), 0.5 * (-r + z)};
}

namespace {

/// Complex chart sending phase space at the origin frame to the invariant
/// ladder amplitude: chart(q, p) = u0 q + i (gz0/wi u0 q + s0 p) with
/// s0 = sqrt(gm0 / 2wi), u0 = sqrt(wi / 2gm0), so chart is real-linear and
/// invertible (u0 s0 = 1/2).
struct LadderChart {
  double s0, u0, gt0;

  LadderChart(const FramePoint& origin, double omega_inv)
      : s0(std::sqrt(origin.g_minus / (2.0 * omega_inv))),
        u0(std::sqrt(omega_inv / (2.0 * origin.g_minus))),
        gt0(origin.g_zero / omega_inv) {}

  std::complex<double> map(double q, double p) const {
    return {u0 * q, gt0 * u0 * q + s0 * p};
  }
  std::pair<double, double> unmap(std::complex<double> w) const {
    return {2.0 * s0 * w.real(), -2.0 * u0 * gt0 * w.real() + 2.0 * u0 * w.imag()};
  }
};

}  // namespace

LadderMap heisenberg_ladder(const InvariantFrame& frame, const DriftState& drift, double t) {
  const FramePoint origin = frame.at(drift.origin());
  const LadderChart chart(origin, frame.omega_inv());
  const PropagatorStep st = step(frame, drift, t);

  const auto push_linear = [&](std::complex<double> w) {
    const auto [q, p] = chart.unmap(w);
    return chart.map(st.a_qq * q + st.a_qp * p, st.a_pq * q + st.a_pp * p);
  };
  const std::complex<double> t1 = push_linear({1.0, 0.0});
  const std::complex<double> ti = push_linear({0.0, 1.0});

  LadderMap out;
  out.lambda1 = 0.5 * (t1 - kI * ti);
  out.lambda2 = 0.5 * (t1 + kI * ti);

  const auto [qoff, poff] = chart.unmap(-drift.beta0());
  const auto [qe, pe] = st.apply(qoff, poff);
  out.displacement = chart.map(qe, pe) + drift.beta0();
  return out;
}

std::complex<double> displacement_d(const InvariantFrame& frame, const DriftState& drift,
                                    double t) {
  return heisenberg_ladder(frame, drift, t).displacement;
}

}  // namespace lrinv
