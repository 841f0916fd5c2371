// Acceptance gate: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lrinv/forced.hpp"
#include "lrinv/invariant.hpp"
#include "lrinv/model.hpp"
#include "lrinv/observables.hpp"
#include "lrinv/oracle.hpp"
#include "lrinv/propagator.hpp"
#include "lrinv/quadrature.hpp"
#include "lrinv/run.hpp"

using namespace lrinv;
using cplx = std::complex<double>;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

OscillatorModel driven_pulsating(bool forced) {
  const std::map<std::string, double> params{
      {"m0", 1.0}, {"gamma", 0.1}, {"mu", 4.0}, {"nu", 1.0 / 3.0}, {"Omega", 1.0}};
  OscillatorModel model = catalog("pulsating", params, 0.0, 40.0);
  if (forced) model.force = expr::TimeFunction::parse("sin(t)");
  return model;
}

OscillatorModel constant_model(double m, double omega, double F, double t1) {
  return catalog("constant", {{"m", m}, {"omega", omega}, {"F", F}}, 0.0, t1);
}

struct Built {
  OscillatorModel model;
  InvariantFrame frame;
  std::shared_ptr<const DriftState> kick;

  explicit Built(OscillatorModel m)
      : model(std::move(m)),
        frame(build_frame(solve_basis(model))),
        kick(drift(frame, model, beta0_matched(model, frame))) {}
};

// 1. The combination g_plus g_minus - g_zero^2 must not drift.
Outcome invariant_conservation() {
  const auto start = std::chrono::steady_clock::now();
  const Built rig(driven_pulsating(true));
  const double wi2_ref = rig.frame.omega_inv() * rig.frame.omega_inv();
  double worst = 0.0;
  for (int k = 0; k <= 800; ++k) {
    const FramePoint g = rig.frame.at(0.05 * k);
    const double wi2 = g.g_plus * g.g_minus - g.g_zero * g.g_zero;
    worst = std::max(worst, std::abs(wi2 - wi2_ref) / wi2_ref);
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-9 && elapsed < 1.0,
          fmt("relative drift %.2e over 801 samples, %.3f s", worst, elapsed)};
}

// 2. det A = 1 along the run, with and without the drive.
Outcome symplectic_determinant() {
  const Built forced(driven_pulsating(true));
  const Built quiet(driven_pulsating(false));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double t = 40.0 * k / 999.0;
    worst = std::max(worst, std::abs(step(forced.frame, *forced.kick, t).det() - 1.0));
    worst = std::max(worst, std::abs(step(quiet.frame, *quiet.kick, t).det() - 1.0));
  }
  return {worst < 1e-9, fmt("max |det A - 1| = %.2e at 1000 times", worst)};
}

// 3. Closed forms vs the independent moment oracle on the driven
//    pulsating-mass run with a displaced initial wavepacket.
Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg;
  cfg.model = "pulsating";
  cfg.params = {{"m0", 1.0}, {"gamma", 0.1}, {"mu", 4.0}, {"nu", 1.0 / 3.0}, {"Omega", 1.0}};
  cfg.force = "sin(t)";
  cfg.force_set = true;
  cfg.t1 = 40.0;
  cfg.dt = 0.05;
  cfg.state = StateSpec::coherent(5.0 / std::sqrt(2.0), 0.0);
  cfg.verify_tol = 1e-6;
  std::ostringstream log;
  const VerifyReport report = verify_run(cfg, log);
  const double elapsed = seconds_since(start);
  return {report.pass && elapsed < 5.0,
          fmt("worst scaled deviation %.2e over [0,40], %.2f s", report.worst, elapsed)};
}

// 4. Dispersions must not feel the drive.
Outcome force_free_dispersions() {
  const Built forced(driven_pulsating(true));
  const Built quiet(driven_pulsating(false));
  const StateSpec state = StateSpec::coherent(5.0 / std::sqrt(2.0), 0.0);
  double worst = 0.0;
  for (int k = 0; k <= 800; ++k) {
    const double t = 0.05 * k;
    const MomentRecord a = state_moments(forced.model, forced.frame, *forced.kick, state, t);
    const MomentRecord b = state_moments(quiet.model, quiet.frame, *quiet.kick, state, t);
    worst = std::max({worst, std::abs(a.var_q - b.var_q), std::abs(a.var_p - b.var_p),
                      std::abs(a.cov_qp - b.cov_qp)});
  }
  return {worst < 1e-12, fmt("max |forced - unforced| second moment = %.2e", worst)};
}

// 5. A constant drive shifts the center of oscillation to F / omega^2; the
//    mean position averaged over whole periods recovers exactly that.
Outcome constant_force_shift() {
  const Built rig(constant_model(1.0, 1.0, 1.0, 32.0));
  const StateSpec state = StateSpec::coherent(1.0, 0.3);
  const double span = 10.0 * std::acos(-1.0);  // five periods of 2 pi
  const double integral = adaptive_simpson<double>(
      [&](double t) { return state_moments(rig.model, rig.frame, *rig.kick, state, t).q_mean; },
      0.0, span, 1e-9, 60, 1.0);
  const double average = integral / span;
  return {std::abs(average - 1.0) < 1e-6, fmt("mean position averages to %.9f", average)};
}

// 6. With the matched drift constant the invariant vacuum sits at zero energy,
//    half a quantum below the instantaneous ground state, and the gap equals
//    omega_I |beta0|^2.
Outcome ground_energy() {
  const Built rig(constant_model(1.0, 1.0, 1.0, 32.0));
  const MomentRecord vac =
      state_moments(rig.model, rig.frame, *rig.kick, StateSpec::coherent(0.0, 0.0), 0.0);
  const double e_inst = hamiltonian_vacuum_moments(rig.model, 0.0).energy;
  const double offset = energy_offset(rig.model, rig.frame);
  const cplx b0 = beta0_matched(rig.model, rig.frame);
  const double direct = rig.frame.omega_inv() * std::norm(b0);
  const bool ok = std::abs(vac.energy) < 1e-10 && std::abs(e_inst - vac.energy - 0.5) < 1e-10 &&
                  std::abs(offset - direct) < 1e-12 && std::abs(offset - 0.5) < 1e-10;
  return {ok, fmt("E_vac = %.2e, gap = %.12f, offset = %.12f", vac.energy, e_inst - vac.energy,
                  offset)};
}

// 7. The ladder-basis change to the instantaneous Hamiltonian stays normalized.
Outcome bogoliubov_normalization() {
  const Built rig(driven_pulsating(false));
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = 40.0 * k / 99.0;
    const BogoliubovPair v = bogoliubov(rig.frame, rig.model, t);
    worst = std::max(worst, std::abs(std::norm(v.v1) - std::norm(v.v2) - 1.0));
  }
  return {worst < 1e-10, fmt("max ||v1|^2 - |v2|^2 - 1| = %.2e at 100 times", worst)};
}

// 8. The fixed-panel drift quadrature converges at fourth order: halving the
//    panel width must shrink the error by 12x..20x against a 10x finer run.
Outcome quadrature_order() {
  const OscillatorModel model = driven_pulsating(true);
  const InvariantFrame frame = build_frame(solve_basis(model));
  const cplx b0 = beta0_matched(model, frame);
  const auto at = [&](double panel) {
    DriftConfig cfg;
    cfg.fixed_panel = panel;
    return drift(frame, model, b0, cfg)->beta(10.0);
  };
  const cplx reference = at(0.01);
  const double coarse = std::abs(at(0.1) - reference);
  const double fine = std::abs(at(0.05) - reference);
  const double ratio = coarse / fine;
  return {coarse > 1e-12 && ratio > 12.0 && ratio < 20.0,
          fmt("error %.2e -> %.2e, ratio %.2f", coarse, fine, ratio)};
}

// 9. Number-state dispersions scale by exactly (2n+1), and the oracle agrees
//    with the n = 2 closed form along the whole run.
Outcome number_state_scaling() {
  const Built rig(driven_pulsating(true));
  for (double t : {0.0, 7.3, 18.2}) {
    const DispersionTriple base = dispersions(rig.frame, t, 0);
    for (int n = 0; n <= 5; ++n) {
      const DispersionTriple d = dispersions(rig.frame, t, n);
      const double scale = 2.0 * n + 1.0;
      if (d.var_q != scale * base.var_q || d.var_p != scale * base.var_p ||
          d.cov_qp != scale * base.cov_qp) {
        return {false, fmt("scaling not exact at n, t = %.0f, %.1f", double(n), t)};
      }
    }
  }
  std::vector<double> grid;
  for (int k = 0; k <= 400; ++k) grid.push_back(0.1 * k);
  const VerifyReport report =
      verify(rig.model, rig.frame, *rig.kick, StateSpec::number_state(2), grid, 1e-6);
  return {report.pass, fmt("exact (2n+1) scaling; n = 2 worst oracle deviation %.2e",
                           report.worst)};
}

// 10. Pulsating-model dispersions match their closed expressions in M and R.
Outcome pulsating_dispersions() {
  const Built rig(driven_pulsating(false));
  double worst_q = 0.0, worst_p = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = 0.1 * k;
    const DispersionTriple d = dispersions(rig.frame, t, 0);
    const double M = rig.model.mass(t);
    const double R = 0.1 + (4.0 / 3.0) * std::cos(t / 3.0);
    const double var_p_closed = 0.5 * M * (1.0 + R * R);
    worst_q = std::max(worst_q, std::abs(d.var_q * 2.0 * M - 1.0));
    worst_p = std::max(worst_p, std::abs(d.var_p - var_p_closed) / var_p_closed);
  }
  return {worst_q < 1e-10 && worst_p < 1e-10,
          fmt("position residual %.2e, momentum residual %.2e", worst_q, worst_p)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"invariant frequency is conserved on the pulsating model", invariant_conservation},
      {"propagator determinant stays 1, driven and undriven", symplectic_determinant},
      {"closed-form moments match the numeric oracle", oracle_equivalence},
      {"second moments are independent of the drive", force_free_dispersions},
      {"constant drive shifts the mean by F / omega^2", constant_force_shift},
      {"matched vacuum energy is zero, half a quantum below instantaneous", ground_energy},
      {"Bogoliubov pair stays normalized", bogoliubov_normalization},
      {"fixed-panel drift quadrature is fourth order", quadrature_order},
      {"number states scale second moments by exactly 2n+1", number_state_scaling},
      {"pulsating dispersions match their closed expressions", pulsating_dispersions},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.ok) ++failures;
    std::printf("criterion %2zu: %s — %s (%s)\n", i + 1, out.ok ? "PASS" : "FAIL",
                criteria[i].name, out.detail.c_str());
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  }
  return failures;
}
