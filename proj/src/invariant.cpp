#include "lrinv/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lrinv/quadrature.hpp"

namespace lrinv {

InvariantFrame::InvariantFrame(std::shared_ptr<const ClassicalBasis> basis, double c1, double c2,
                               double c3)
    : basis_(std::move(basis)), c1_(c1), c2_(c2), c3_(c3) {
  const double det = c1 * c3 - 0.25 * c2 * c2;
  if (!(c1 > 0.0) || !(det > 0.0)) {
    throw ConfigError("invariant constants need c1 > 0 and c1 c3 - c2^2/4 > 0");
  }
  const double w = basis_->wronskian();
  if (!(w > 0.0)) {
    throw ConfigError("classical basis must have a positive Wronskian, got " + std::to_string(w));
  }
  omega_inv_ = w * std::sqrt(det);
}

FramePoint InvariantFrame::at(double t) const {
  const BasisSample s = basis_->at(t);
  FramePoint g;
  g.g_minus = c1_ * s.f1 * s.f1 + c2_ * s.f1 * s.f2 + c3_ * s.f2 * s.f2;
  g.g_zero = -(c1_ * s.f1 * s.pi1 + 0.5 * c2_ * (s.pi1 * s.f2 + s.f1 * s.pi2) +
               c3_ * s.f2 * s.pi2);
  if (!(g.g_minus > 0.0)) {
    throw SolverError("invariant coefficient g_minus lost positivity at t=" + std::to_string(t) +
                      "; the classical basis is unusable there");
  }
  g.g_plus = (omega_inv_ * omega_inv_ + g.g_zero * g.g_zero) / g.g_minus;
  return g;
}

InvariantFrame build_frame(std::shared_ptr<const ClassicalBasis> basis, double c1, double c2,
                           double c3) {
  return InvariantFrame(std::move(basis), c1, c2, c3);
}

PhaseAccumulator::PhaseAccumulator(InvariantFrame frame, expr::TimeFunction mass, double t_origin,
                                   double panel_tol)
    : frame_(std::move(frame)),
      mass_(std::move(mass)),
      origin_(t_origin),
      panel_tol_(panel_tol) {
  mark_t_.push_back(origin_);
  mark_value_.push_back(0.0);
}

double PhaseAccumulator::rate(double t) const {
  return frame_.omega_inv() / (mass_(t) * frame_.at(t).g_minus);
}

double PhaseAccumulator::value(double t) const {
  const auto integrand = [this](double s) { return rate(s); };
  if (t < origin_) {
    // Backward queries are rare; integrate directly, no caching.
    return adaptive_simpson<double>(integrand, origin_, t, panel_tol_, 60, 2.0);
  }

  double base_t = origin_;
  double base_v = 0.0;
  std::size_t seen = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    seen = mark_t_.size();
    const auto it = std::upper_bound(mark_t_.begin(), mark_t_.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - mark_t_.begin()) - 1;
    base_t = mark_t_[idx];
    base_v = mark_value_[idx];
  }
  if (base_t == t) return base_v;

  const double value = base_v + adaptive_simpson<double>(integrand, base_t, t, panel_tol_, 60, 2.0);
  {
    std::lock_guard<std::mutex> lock(mu_);
    // Extend the cache only if nobody else did meanwhile; the value itself
    // is correct either way.
    if (mark_t_.size() == seen && t > mark_t_.back()) {
      mark_t_.push_back(t);
      mark_value_.push_back(value);
    }
  }
  return value;
}

}  // namespace lrinv
