#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrinv/oracle.hpp"

namespace lrinv {

inline constexpr const char* kVersion = "0.1.0";

/// Everything a run needs, collected from flags and/or a config file.
/// String-valued fields hold the user's source text so provenance survives
/// into the output header; parsing happens in build_pipeline().
struct RunConfig {
  std::string model = "expression";
  std::map<std::string, double> params;  // catalog parameters

  std::string mass = "1";
  std::string omega_sq = "1";
  std::string force = "0";
  bool force_set = false;     // explicit force overrides a catalog default
  bool omega_seen = false;    // --omega and --omega-sq are mutually exclusive
  bool omega_sq_seen = false;

  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 0.1;

  double c1 = 1.0, c2 = 0.0, c3 = 1.0;

  StateSpec state = StateSpec::coherent(0.0, 0.0);
  std::string beta0 = "matched";  // or "RE" / "RE,IM"

  double theta_tol = 1e-11;
  double drift_tol = 1e-11;
  double fixed_panel = 0.0;  // > 0 switches the drive quadrature to a fixed grid
  double verify_tol = 1e-6;
  int ellipse_every = 0;  // emit ellipse rows every k-th grid point (0 = off)

  std::string output;  // simulate: path for the table ("" = stdout)
};

/// Built objects shared by simulate and verify.
struct Pipeline {
  OscillatorModel model;
  std::shared_ptr<const ClassicalBasis> basis;
  std::optional<InvariantFrame> frame;
  std::shared_ptr<const DriftState> drift;
  StateSpec state;
  std::complex<double> beta0{0.0, 0.0};
};

Pipeline build_pipeline(const RunConfig& cfg);

/// Uniform grid t0, t0+dt, ..., capped at t1 (inclusive up to rounding).
std::vector<double> make_grid(double t0, double t1, double dt);

/// Writes the run table as CSV with a commented header block.
void simulate(const RunConfig& cfg, std::ostream& out);

/// Closed form vs. direct integration over the run grid; prints one row per
/// quantity plus a verdict line.
VerifyReport verify_run(const RunConfig& cfg, std::ostream& log);

/// Runs each config file as an independent simulation (output path from the
/// file, else "<stem>.csv"), `jobs` at a time. Returns the failure count.
int sweep(const std::vector<std::string>& files, int jobs, std::ostream& log);

/// Number, or "P/Q" ratio of numbers (handy for thirds in config files).
double parse_real(const std::string& text, const std::string& what);

/// "RE" or "RE,IM"; each part goes through parse_real.
std::complex<double> parse_complex(const std::string& text, const std::string& what);

/// "number:N", "coherent:MAG" or "coherent:MAG,DELTA".
StateSpec parse_state(const std::string& text);

/// Applies one key/value pair ('-' and '_' are interchangeable in keys).
/// Unrecognized keys are treated as catalog parameters and validated when
/// the model is built. "omega" on the expression model is squared into
/// omega_sq; on catalog models it stays a plain numeric parameter.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// apply_key over a pair list, with "model" applied first so that keys whose
/// meaning depends on the model kind land correctly regardless of order.
void apply_all(RunConfig& cfg, const std::vector<std::pair<std::string, std::string>>& pairs);

/// key = value lines; '#' and ';' comments and [section] markers ignored.
std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path);

std::string catalog_text();

}  // namespace lrinv
