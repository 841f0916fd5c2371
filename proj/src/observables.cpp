#include "lrinv/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrinv {

DispersionTriple dispersions(const InvariantFrame& frame, double t, int n) {
  if (n < 0) throw ConfigError("number-state index must be non-negative");
  const FramePoint g = frame.at(t);
  const double wi = frame.omega_inv();
  const double scale = 2.0 * n + 1.0;  // single state factor on the vacuum triple
  const double var_q0 = g.g_minus / (2.0 * wi);
  const double var_p0 = (wi / (2.0 * g.g_minus)) * (1.0 + (g.g_zero / wi) * (g.g_zero / wi));
  const double cov0 = -g.g_zero / (2.0 * wi);
  return {scale * var_q0, scale * var_p0, scale * cov0};
}

std::pair<double, double> coherent_means(const InvariantFrame& frame, double magnitude,
                                         double delta) {
  const double t0 = frame.basis().t_min();
  const double gm0 = frame.at(t0).g_minus;
  const double wi = frame.omega_inv();
  return {std::sqrt(2.0 * gm0 / wi) * magnitude * std::cos(delta),
          -std::sqrt(2.0 * wi / gm0) * magnitude * std::sin(delta)};
}

MomentRecord state_moments(const OscillatorModel& model, const InvariantFrame& frame,
                           const DriftState& drift, const StateSpec& state, double t) {
  const FramePoint origin = frame.at(drift.origin());
  const double wi = frame.omega_inv();
  const double s0 = std::sqrt(origin.g_minus / (2.0 * wi));
  const double u0 = std::sqrt(wi / (2.0 * origin.g_minus));
  const double gt0 = origin.g_zero / wi;

  // Vacuum offset: the state ladder is displaced by beta0 relative to the
  // bare invariant ladder, so even |n> starts with nonzero means.
  const std::complex<double> b0 = drift.beta0();
  double q0 = -2.0 * s0 * b0.real();
  double p0 = -2.0 * u0 * (b0.imag() - gt0 * b0.real());

  if (state.kind == StateSpec::Kind::coherent) {
    const auto [qa, pa] = coherent_means(frame, state.magnitude, state.delta);
    q0 += qa;
    p0 += pa;
  }

  const PropagatorStep st = step(frame, drift, t);
  const auto [qm, pm] = st.apply(q0, p0);
  const int n = state.kind == StateSpec::Kind::number ? state.n : 0;
  const DispersionTriple d = dispersions(frame, t, n);

  MomentRecord rec;
  rec.t = t;
  rec.q_mean = qm;
  rec.p_mean = pm;
  rec.var_q = d.var_q;
  rec.var_p = d.var_p;
  rec.cov_qp = d.cov_qp;
  rec.energy = energy(model, rec);
  return rec;
}

double energy(const OscillatorModel& model, const MomentRecord& r) {
  const double m = model.mass(r.t);
  const double w2 = model.omega_sq(r.t);
  const double f = model.force(r.t);
  return (r.var_p + r.p_mean * r.p_mean) / (2.0 * m) +
         0.5 * m * w2 * (r.var_q + r.q_mean * r.q_mean) - m * f * r.q_mean;
}

double energy_offset(const OscillatorModel& model, const InvariantFrame& frame) {
  const double b = std::abs(beta0_matched(model, frame));
  return frame.omega_inv() * b * b;
}

MomentRecord hamiltonian_vacuum_moments(const OscillatorModel& model, double t) {
  const double w2 = model.omega_sq(t);
  if (!(w2 > 0.0)) {
    throw SolverError("instantaneous frequency squared is non-positive at t=" + std::to_string(t) +
                      "; the Hamiltonian has no ground state there");
  }
  const double w = std::sqrt(w2);
  const double m = model.mass(t);
  MomentRecord rec;
  rec.t = t;
  rec.var_q = 1.0 / (2.0 * m * w);
  rec.var_p = 0.5 * m * w;
  rec.cov_qp = 0.0;
  rec.energy = energy(model, rec);
  return rec;
}

EllipseSpec ellipse(const MomentRecord& r) {
  const double a = r.var_q;
  const double c = r.var_p;
  const double b = r.cov_qp;
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  const double lo = mean - disc;
  if (!(lo > 0.0)) {
    throw std::invalid_argument("covariance matrix is not positive definite");
  }
  EllipseSpec e;
  e.axis_major = std::sqrt(mean + disc);
  e.axis_minor = std::sqrt(lo);
  e.tilt = 0.5 * std::atan2(2.0 * b, a - c);
  return e;
}

}  // namespace lrinv
