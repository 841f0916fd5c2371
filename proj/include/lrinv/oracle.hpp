#pragma once

#include <string>
#include <vector>

#include "lrinv/forced.hpp"
#include "lrinv/observables.hpp"

namespace lrinv {

/// Direct numerical evolution of the first and second moments, sharing no
/// code path with the invariant construction: the coupled system
///   q' = p / M                      p' = -M w2 q + M F
///   Sqq' = 2 Sqp / M                Sqp' = Spp / M - M w2 Sqq
///   Spp' = -2 M w2 Sqp
/// is integrated with the adaptive Runge-Kutta solver. det Sigma is
/// conserved, which the tests use as an internal consistency check.
struct OracleConfig {
  SolverConfig solver{1e-11, 1e-11, 2'000'000, 0.0, 0.0};
};

struct OracleRun {
  std::vector<MomentRecord> records;
};

/// Evolves `initial` (taken at grid.front()) across the ascending grid;
/// each grid time is an exact step endpoint, never an interpolation.
OracleRun evolve_moments(const OscillatorModel& model, const MomentRecord& initial,
                         const std::vector<double>& grid, const OracleConfig& cfg = {});

struct DeviationRow {
  std::string quantity;
  double max_dev = 0.0;  // max over grid of |closed - oracle| / (1 + |closed|)
  double at_t = 0.0;
};

struct VerifyReport {
  std::vector<DeviationRow> rows;
  double worst = 0.0;
  bool pass = false;
};

/// Runs the closed-form moments and the oracle over the same grid and
/// reports the worst scaled deviation per quantity. The scale (1 + |closed|)
/// makes the threshold meaningful for quantities that grow by orders of
/// magnitude over a run.
VerifyReport verify(const OscillatorModel& model, const InvariantFrame& frame,
                    const DriftState& drift, const StateSpec& state,
                    const std::vector<double>& grid, double tol,
                    const OracleConfig& cfg = {});

}  // namespace lrinv
