#pragma once

#include <complex>
#include <utility>

#include "lrinv/forced.hpp"

namespace lrinv {

/// Closed-form Heisenberg evolution from the drift origin t0 to time t:
///
///   q(t) = a_qq q0 + a_qp p0 + c_q,    p(t) = a_pq q0 + a_pp p0 + c_p.
///
/// The linear part A is symplectic (det A = 1 identically, criterion for
/// canonical evolution); the affine part carries the drive. Steps compose:
/// a step t0->t2 equals compose(step(t1->t2 seen from t0's frame), t0->t1).
struct PropagatorStep {
  double t = 0.0;
  double a_qq = 1.0, a_qp = 0.0;
  double a_pq = 0.0, a_pp = 1.0;
  double c_q = 0.0, c_p = 0.0;

  std::pair<double, double> apply(double q0, double p0) const {
    return {a_qq * q0 + a_qp * p0 + c_q, a_pq * q0 + a_pp * p0 + c_p};
  }

  double det() const { return a_qq * a_pp - a_qp * a_pq; }

  /// later ∘ earlier: A = A2 A1, c = A2 c1 + c2.
  static PropagatorStep compose(const PropagatorStep& later, const PropagatorStep& earlier);
};

/// Builds the step from its scalar ingredients; exposed so that sensitivity
/// checks can feed perturbed phases without rebuilding a drift state.
PropagatorStep step_from_scalars(const FramePoint& origin, const FramePoint& now, double omega_inv,
                                 double theta, std::complex<double> f_cal, double t);

PropagatorStep step(const InvariantFrame& frame, const DriftState& drift, double t);

/// Coefficients (v1, v2) expressing the instantaneous-Hamiltonian ladder
/// operator a(t) in the invariant pair (B, B^dagger); |v1|^2 - |v2|^2 = 1.
/// Defined only where w2(t) > 0 (throws SolverError otherwise).
struct BogoliubovPair {
  std::complex<double> v1;
  std::complex<double> v2;
};

BogoliubovPair bogoliubov(const InvariantFrame& frame, const OscillatorModel& model, double t);

/// Evolution of the invariant ladder operator B(t0) expressed at time t:
///   B -> lambda1 B + lambda2 B^dagger + displacement.
/// |lambda1|^2 - |lambda2|^2 = det A = 1, and the displacement vanishes for
/// an unforced model started with beta0 = 0.
struct LadderMap {
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  std::complex<double> displacement;
};

LadderMap heisenberg_ladder(const InvariantFrame& frame, const DriftState& drift, double t);

/// The displacement component alone.
std::complex<double> displacement_d(const InvariantFrame& frame, const DriftState& drift,
                                    double t);

}  // namespace lrinv
