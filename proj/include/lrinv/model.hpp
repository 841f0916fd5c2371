#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lrinv/expr.hpp"

namespace lrinv {

class ClassicalBasis;

/// Oscillator with time-dependent mass M(t), squared frequency w2(t) and a
/// homogeneous drive F(t):
///
///   H = p^2 / (2 M) + M w2 q^2 / 2 - M F q
///
/// w2 may go negative (inverted regime); M must stay positive on [t0, t1].
/// Catalog entries additionally carry the closed-form solution pair of
///   d/dt (M dq/dt) + M w2 q = 0
/// so downstream numerics can be checked against it; expression models leave
/// `analytic_basis` empty and are solved numerically.
struct OscillatorModel {
  expr::TimeFunction mass = expr::TimeFunction::constant(1.0);
  expr::TimeFunction omega_sq = expr::TimeFunction::constant(1.0);
  expr::TimeFunction force;  // defaults to zero
  double t0 = 0.0;
  double t1 = 10.0;
  std::string name = "expression";

  /// Quadratic-form constants (c1, c2, c3) selecting the invariant; the
  /// default (1, 0, 1) is the conventional choice.
  std::array<double, 3> frame_constants{1.0, 0.0, 1.0};

  std::shared_ptr<const ClassicalBasis> analytic_basis;

  /// Checks t1 > t0 and samples M(t) on a dense grid; throws ConfigError on
  /// a non-positive mass, EvalError if a coefficient cannot be evaluated.
  void validate() const;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<std::string> parameters;  // "name=default" or "name (required)"
};

/// Named models with closed-form classical solutions. `params` must supply
/// exactly the parameters the entry declares (unknown keys are rejected).
OscillatorModel catalog(const std::string& name, const std::map<std::string, double>& params,
                        double t0, double t1);

const std::vector<CatalogEntry>& catalog_entries();

}  // namespace lrinv
