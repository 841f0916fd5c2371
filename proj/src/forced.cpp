#include "lrinv/forced.hpp"

#include <algorithm>
#include <cmath>

#include "lrinv/quadrature.hpp"

namespace lrinv {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

std::complex<double> beta0_matched(const OscillatorModel& model, const InvariantFrame& frame) {
  const double t0 = model.t0;
  const double gm0 = frame.at(t0).g_minus;
  const double wi = frame.omega_inv();
  const double value =
      -0.5 * (model.mass(t0) / wi) * std::sqrt(2.0 * gm0 / wi) * model.force(t0);
  return {value + 0.0, 0.0};  // map -0 to 0 when the drive starts quiet
}

DriftState::DriftState(InvariantFrame frame, const OscillatorModel& model,
                       std::complex<double> beta0, DriftConfig cfg)
    : frame_(frame),
      mass_(model.mass),
      force_(model.force),
      beta0_(beta0),
      cfg_(cfg),
      origin_(model.t0),
      phase_(std::move(frame), model.mass, model.t0, cfg.theta_tol) {
  mark_t_.push_back(origin_);
  mark_j_.emplace_back(0.0, 0.0);
}

std::complex<double> DriftState::chunk(double a, double b) const {
  const auto integrand = [this](double s) -> std::complex<double> {
    const double k =
        std::sqrt(frame_.at(s).g_minus / (2.0 * frame_.omega_inv())) * mass_(s) * force_(s);
    return k * std::exp(kI * phase_.value(s));
  };
  return adaptive_simpson<std::complex<double>>(integrand, a, b, cfg_.panel_tol);
}

std::complex<double> DriftState::accumulated(double t) const {
  if (t == origin_) return {0.0, 0.0};

  if (cfg_.fixed_panel > 0.0) {
    // Fixed-grid mode: one composite pass from the origin each call, so the
    // quadrature error scales with the panel width alone.
    const double span = t - origin_;
    const auto integrand = [this](double s) -> std::complex<double> {
      const double k =
          std::sqrt(frame_.at(s).g_minus / (2.0 * frame_.omega_inv())) * mass_(s) * force_(s);
      return k * std::exp(kI * phase_.value(s));
    };
    const auto panels =
        static_cast<std::size_t>(std::ceil(std::abs(span) / cfg_.fixed_panel));
    return composite_simpson<std::complex<double>>(integrand, origin_, t,
                                                   std::max<std::size_t>(panels, 1));
  }

  if (t < origin_) return chunk(origin_, t);

  double base_t = origin_;
  std::complex<double> base_j{0.0, 0.0};
  std::size_t seen = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    seen = mark_t_.size();
    const auto it = std::upper_bound(mark_t_.begin(), mark_t_.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - mark_t_.begin()) - 1;
    base_t = mark_t_[idx];
    base_j = mark_j_[idx];
  }
  if (base_t == t) return base_j;

  // March in panels short enough that the oscillatory factor advances by at
  // most `phase_fraction` radians, so the adaptive estimate cannot alias.
  std::complex<double> j = base_j;
  double cur = base_t;
  while (cur < t) {
    const double w0 = t - cur;
    const double rmax = std::max({phase_.rate(cur), phase_.rate(cur + 0.5 * w0),
                                  phase_.rate(cur + w0)});
    double w = w0;
    if (rmax > 0.0) w = std::min(w0, cfg_.phase_fraction / rmax);
    const double next = (cur + w >= t - 1e-14 * std::max(1.0, std::abs(t))) ? t : cur + w;
    j += chunk(cur, next);
    cur = next;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (mark_t_.size() == seen && t > mark_t_.back()) {
      mark_t_.push_back(t);
      mark_j_.push_back(j);
    }
  }
  return j;
}

std::complex<double> DriftState::beta(double t) const {
  return std::exp(-kI * phase_.value(t)) * (beta0_ - kI * accumulated(t));
}

std::complex<double> DriftState::f_cal(double t) const {
  return kI * std::exp(-kI * phase_.value(t)) * accumulated(t);
}

std::shared_ptr<const DriftState> drift(const InvariantFrame& frame, const OscillatorModel& model,
                                        std::complex<double> beta0, const DriftConfig& cfg) {
  return std::make_shared<const DriftState>(frame, model, beta0, cfg);
}

}  // namespace lrinv
