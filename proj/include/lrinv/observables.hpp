#pragma once

#include <complex>

#include "lrinv/propagator.hpp"

namespace lrinv {

/// Initial state referred to the invariant ladder basis at t0: either the
/// number state |n> or a coherent state of modulus `magnitude` and phase
/// angle `delta` (mean displacement in the invariant polar chart).
struct StateSpec {
  enum class Kind { number, coherent };
  Kind kind = Kind::coherent;
  int n = 0;
  double magnitude = 0.0;
  double delta = 0.0;

  static StateSpec number_state(int n) {
    StateSpec s;
    s.kind = Kind::number;
    s.n = n;
    return s;
  }
  static StateSpec coherent(double magnitude, double delta) {
    StateSpec s;
    s.kind = Kind::coherent;
    s.magnitude = magnitude;
    s.delta = delta;
    return s;
  }
};

struct MomentRecord {
  double t = 0.0;
  double q_mean = 0.0;
  double p_mean = 0.0;
  double var_q = 0.0;
  double var_p = 0.0;
  double cov_qp = 0.0;  // symmetrized: <qp+pq>/2 - <q><p>
  double energy = 0.0;
};

struct DispersionTriple {
  double var_q = 0.0;
  double var_p = 0.0;
  double cov_qp = 0.0;
};

/// Second central moments in the invariant number state |n>; a single state
/// factor (2n+1) multiplies the n = 0 triple:
///   var_q = g_minus / (2 omega_I)
///   var_p = (omega_I / (2 g_minus)) (1 + g_zero^2 / omega_I^2)
///   cov   = -g_zero / (2 omega_I)
/// The uncertainty product var_q var_p - cov^2 is (2n+1)^2 / 4 exactly.
DispersionTriple dispersions(const InvariantFrame& frame, double t, int n);

/// Initial means of the coherent state (polar chart at t0):
///   q(t0) = sqrt(2 g_minus(t0) / omega_I) |alpha| cos(delta)
///   p(t0) = -sqrt(2 omega_I / g_minus(t0)) |alpha| sin(delta)
std::pair<double, double> coherent_means(const InvariantFrame& frame, double magnitude,
                                         double delta);

/// Full first and second moments at time t for the given initial state,
/// evolved by the closed-form propagator. Includes the energy column.
MomentRecord state_moments(const OscillatorModel& model, const InvariantFrame& frame,
                           const DriftState& drift, const StateSpec& state, double t);

/// <H(t)> from a moment record:
///   (var_p + p^2) / (2M) + M w2 (var_q + q^2) / 2 - M F q.
double energy(const OscillatorModel& model, const MomentRecord& record);

/// omega_I |beta0_matched|^2: the constant separating the invariant-vacuum
/// energy from the instantaneous-vacuum energy at t0 for the matched drive.
double energy_offset(const OscillatorModel& model, const InvariantFrame& frame);

/// Ground-state moments of the instantaneous Hamiltonian at time t
/// (var_q = 1/(2 M w), var_p = M w / 2, zero means). Needs w2(t) > 0.
MomentRecord hamiltonian_vacuum_moments(const OscillatorModel& model, double t);

/// 1-sigma covariance ellipse of (q, p): semi-axes (major first) and the
/// major-axis tilt from the q axis, in (-pi/2, pi/2].
struct EllipseSpec {
  double axis_major = 0.0;
  double axis_minor = 0.0;
  double tilt = 0.0;
};

EllipseSpec ellipse(const MomentRecord& record);

}  // namespace lrinv
