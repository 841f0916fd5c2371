#include "lrinv/model.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "lrinv/classical.hpp"
#include "lrinv/errors.hpp"

namespace lrinv {

namespace {

std::string fmt(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

double require(const std::map<std::string, double>& params, const std::string& model,
               const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ConfigError("model '" + model + "' needs parameter '" + key + "'");
  }
  return it->second;
}

void reject_unknown(const std::map<std::string, double>& params, const std::string& model,
                    const std::set<std::string>& known) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (!known.count(key)) {
      throw ConfigError("model '" + model + "' has no parameter '" + key + "'");
    }
  }
}

/// M = m0 exp(2 (gamma t + mu sin(nu t))), w2 = Omega^2 + R^2 - mu nu^2 sin(nu t)
/// with R = gamma + mu nu cos(nu t). The pair
///   f1 = cos(Omega (t - t0)) / sqrt(M),  f2 = sin(Omega (t - t0)) / sqrt(M)
/// solves d/dt(M f') + M w2 f = 0 with Wronskian W = Omega, because the
/// substitution f = c / sqrt(M) reduces the equation to c'' = -Omega^2 c.
OscillatorModel make_pulsating(const std::map<std::string, double>& params, double t0,
                               double t1) {
  reject_unknown(params, "pulsating", {"m0", "gamma", "mu", "nu", "Omega"});
  const double m0 = require(params, "pulsating", "m0");
  const double gamma = require(params, "pulsating", "gamma");
  const double mu = require(params, "pulsating", "mu");
  const double nu = require(params, "pulsating", "nu");
  const double Omega = require(params, "pulsating", "Omega");
  if (!(m0 > 0.0)) throw ConfigError("pulsating: m0 must be positive");
  if (!(Omega > 0.0)) throw ConfigError("pulsating: Omega must be positive");

  OscillatorModel m;
  m.name = "pulsating";
  m.t0 = t0;
  m.t1 = t1;
  m.mass = expr::TimeFunction::native(
      fmt(m0) + "*exp(2*(" + fmt(gamma) + "*t+" + fmt(mu) + "*sin(" + fmt(nu) + "*t)))",
      [=](double t) { return m0 * std::exp(2.0 * (gamma * t + mu * std::sin(nu * t))); });
  m.omega_sq = expr::TimeFunction::native(
      "(" + fmt(Omega) + ")^2+(" + fmt(gamma) + "+" + fmt(mu * nu) + "*cos(" + fmt(nu) +
          "*t))^2-" + fmt(mu * nu * nu) + "*sin(" + fmt(nu) + "*t)",
      [=](double t) {
        const double r = gamma + mu * nu * std::cos(nu * t);
        return Omega * Omega + r * r - mu * nu * nu * std::sin(nu * t);
      });

  auto closed = [=](double t) {
    const double root_m = std::sqrt(m0) * std::exp(gamma * t + mu * std::sin(nu * t));
    const double r = gamma + mu * nu * std::cos(nu * t);
    const double c = std::cos(Omega * (t - t0));
    const double s = std::sin(Omega * (t - t0));
    BasisSample b;
    b.f1 = c / root_m;
    b.f2 = s / root_m;
    b.pi1 = root_m * (-Omega * s - r * c);
    b.pi2 = root_m * (Omega * c - r * s);
    b.df1 = b.pi1 / (root_m * root_m);
    b.df2 = b.pi2 / (root_m * root_m);
    return b;
  };
  m.analytic_basis = std::make_shared<ClassicalBasis>(closed, t0, t1);
  return m;
}

/// Constant coefficients; f1 = cos(omega (t - t0)) / sqrt(m) and the matching
/// sine solve m f'' + m omega^2 f = 0 with W = omega.
OscillatorModel make_constant(const std::map<std::string, double>& params, double t0, double t1) {
  reject_unknown(params, "constant", {"m", "omega", "F"});
  const double m = require(params, "constant", "m");
  const double omega = require(params, "constant", "omega");
  const double F = require(params, "constant", "F");
  if (!(m > 0.0)) throw ConfigError("constant: m must be positive");
  if (!(omega > 0.0)) throw ConfigError("constant: omega must be positive");

  OscillatorModel mdl;
  mdl.name = "constant";
  mdl.t0 = t0;
  mdl.t1 = t1;
  mdl.mass = expr::TimeFunction::constant(m);
  mdl.omega_sq = expr::TimeFunction::constant(omega * omega);
  mdl.force = expr::TimeFunction::constant(F);

  auto closed = [=](double t) {
    const double root_m = std::sqrt(m);
    const double c = std::cos(omega * (t - t0));
    const double s = std::sin(omega * (t - t0));
    BasisSample b;
    b.f1 = c / root_m;
    b.f2 = s / root_m;
    b.pi1 = -omega * root_m * s;
    b.pi2 = omega * root_m * c;
    b.df1 = b.pi1 / m;
    b.df2 = b.pi2 / m;
    return b;
  };
  mdl.analytic_basis = std::make_shared<ClassicalBasis>(closed, t0, t1);
  return mdl;
}

}  // namespace

void OscillatorModel::validate() const {
  if (!(t1 > t0)) throw ConfigError("t1 must exceed t0");
  constexpr int kSamples = 257;
  for (int i = 0; i < kSamples; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / (kSamples - 1);
    const double m = mass(t);
    if (!(m > 0.0)) {
      throw ConfigError("mass must stay positive; mass(" + fmt(t) + ") = " + fmt(m));
    }
    omega_sq(t);  // surfaces EvalError early
    force(t);
  }
  if (!(frame_constants[0] > 0.0) ||
      !(frame_constants[0] * frame_constants[2] -
            0.25 * frame_constants[1] * frame_constants[1] >
        0.0)) {
    throw ConfigError("invariant constants need c1 > 0 and c1 c3 - c2^2/4 > 0");
  }
}

OscillatorModel catalog(const std::string& name, const std::map<std::string, double>& params,
                        double t0, double t1) {
  if (name == "pulsating") return make_pulsating(params, t0, t1);
  if (name == "constant") return make_constant(params, t0, t1);
  throw ConfigError("unknown model '" + name + "'; available: pulsating, constant, expression");
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"pulsating",
       "mass m0 exp(2(gamma t + mu sin(nu t))) with the frequency profile that keeps the "
       "invariant frequency at Omega; closed-form basis attached",
       {"m0 (required, > 0)", "gamma (required)", "mu (required)", "nu (required)",
        "Omega (required, > 0)"}},
      {"constant",
       "time-independent mass, frequency and force; closed-form basis attached",
       {"m (required, > 0)", "omega (required, > 0)", "F (required)"}},
  };
  return entries;
}

}  // namespace lrinv
