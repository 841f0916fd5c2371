#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "lrinv/invariant.hpp"
#include "lrinv/model.hpp"

namespace lrinv {

/// Initial drive amplitude for which the forced vacuum starts with zero mean
/// displacement offset matched to the instantaneous force:
///   beta0 = -(M(t0) / (2 omega_I)) sqrt(2 g_minus(t0) / omega_I) F(t0).
/// Real by construction.
std::complex<double> beta0_matched(const OscillatorModel& model, const InvariantFrame& frame);

struct DriftConfig {
  double panel_tol = 1e-11;     // absolute tolerance per quadrature chunk
  double phase_fraction = 0.39269908169872414;  // max phase advance per panel (pi/8)
  double fixed_panel = 0.0;     // > 0: composite Simpson with this panel width, no caching
  double theta_tol = 1e-11;     // phase accumulator tolerance
};

/// Drive-induced drift of the invariant ladder operator. With the phase
/// Theta(t) and the kernel K(t) = sqrt(g_minus / (2 omega_I)) M F, define
///
///   J(t)    = integral t0..t of K e^{i Theta} dt'
///   beta(t) = e^{-i Theta} (beta0 - i J)
///   Fcal(t) = i e^{-i Theta} J            (independent of beta0)
///
/// beta solves beta' + i (omega_I / (M g_minus)) beta = -i K, carrying the
/// whole effect of the drive; Fcal is the piece entering the propagator's
/// affine term. J is cached monotonically, with panels capped so the phase
/// advances at most `phase_fraction` radians per panel. Not copyable; share
/// via the shared_ptr returned by drift().
class DriftState {
 public:
  DriftState(InvariantFrame frame, const OscillatorModel& model, std::complex<double> beta0,
             DriftConfig cfg);
  DriftState(const DriftState&) = delete;
  DriftState& operator=(const DriftState&) = delete;

  std::complex<double> beta(double t) const;
  std::complex<double> f_cal(double t) const;
  std::complex<double> beta0() const { return beta0_; }
  double theta(double t) const { return phase_.value(t); }
  const PhaseAccumulator& phase() const { return phase_; }
  const InvariantFrame& frame() const { return frame_; }
  double origin() const { return origin_; }

 private:
  std::complex<double> accumulated(double t) const;  // J(t)
  std::complex<double> chunk(double a, double b) const;

  InvariantFrame frame_;
  expr::TimeFunction mass_;
  expr::TimeFunction force_;
  std::complex<double> beta0_;
  DriftConfig cfg_;
  double origin_;
  PhaseAccumulator phase_;
  mutable std::mutex mu_;
  mutable std::vector<double> mark_t_;
  mutable std::vector<std::complex<double>> mark_j_;
};

std::shared_ptr<const DriftState> drift(const InvariantFrame& frame, const OscillatorModel& model,
                                        std::complex<double> beta0, const DriftConfig& cfg = {});

}  // namespace lrinv
