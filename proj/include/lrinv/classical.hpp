#pragma once

#include <functional>
#include <memory>

#include "lrinv/model.hpp"
#include "lrinv/ode.hpp"

namespace lrinv {

/// Basis pair of the classical equation d/dt (M df/dt) + M w2 f = 0 at one
/// time, carried as (f, pi) with pi = M df/dt so no dM/dt ever enters.
struct BasisSample {
  double f1 = 0.0, pi1 = 0.0;
  double f2 = 0.0, pi2 = 0.0;
  double df1 = 0.0, df2 = 0.0;  // = pi / M, for convenience
};

/// Two independent solutions with positive Wronskian
///   W = M (f1 f2' - f2 f1') = f1 pi2 - f2 pi1,
/// constant in time. Numerically solved bases are normalized at t0 by
///   f1(t0) = 1, f1'(t0) = 0,   f2(t0) = 0, f2'(t0) = 1 / M(t0)
/// giving W = 1; closed-form (catalog) bases keep their conventional pair
/// (W = Omega for the catalog entries). Everything downstream depends only
/// on W and quadratic combinations, never on the normalization itself.
/// Closed forms evaluate anywhere; numeric ones interpolate an adaptive
/// solve and are valid on [t_min, t_max] only.
class ClassicalBasis {
 public:
  using Closure = std::function<BasisSample(double)>;

  ClassicalBasis(Closure closed_form, double t_min, double t_max);
  ClassicalBasis(std::shared_ptr<const OdeTable<4>> table, expr::TimeFunction mass);

  BasisSample at(double t) const;

  /// W(t) recomputed from the sample; constant in exact arithmetic.
  double wronskian_at(double t) const { const auto s = at(t); return s.f1 * s.pi2 - s.f2 * s.pi1; }

  /// The nominal (t0) Wronskian used for normalization elsewhere.
  double wronskian() const { return wronskian_at(t_min_); }

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

 private:
  Closure closed_;
  std::shared_ptr<const OdeTable<4>> table_;
  expr::TimeFunction mass_;
  double t_min_ = 0.0, t_max_ = 0.0;
};

/// Solves the basis equation over [model.t0, model.t1]. Returns the model's
/// closed form when it has one, otherwise integrates (f1, pi1, f2, pi2).
std::shared_ptr<const ClassicalBasis> solve_basis(const OscillatorModel& model,
                                                  const SolverConfig& cfg = {});

}  // namespace lrinv
