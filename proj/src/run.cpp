#include "lrinv/run.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace lrinv {

namespace {

std::string fmt(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(what + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

long parse_int(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(what + ": cannot parse '" + text + "' as an integer");
  }
  return v;
}

expr::TimeFunction parse_coefficient(const std::string& source, const std::string& what) {
  try {
    return expr::TimeFunction::parse(source);
  } catch (const ParseError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

bool is_expression_key(const std::string& k) {
  return k == "mass" || k == "omega" || k == "omega_sq";
}

}  // namespace

double parse_real(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  const auto slash = s.find('/');
  if (slash != std::string::npos && slash > 0 && slash + 1 < s.size()) {
    const double num = parse_plain(s.substr(0, slash), what);
    const double den = parse_plain(s.substr(slash + 1), what);
    if (den == 0.0) throw ConfigError(what + ": division by zero in '" + text + "'");
    return num / den;
  }
  return parse_plain(s, what);
}

std::complex<double> parse_complex(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_real(s, what), 0.0};
  return {parse_real(s.substr(0, comma), what), parse_real(s.substr(comma + 1), what)};
}

StateSpec parse_state(const std::string& text) {
  const std::string s = trim(text);
  const auto colon = s.find(':');
  const std::string kind = colon == std::string::npos ? s : trim(s.substr(0, colon));
  const std::string rest = colon == std::string::npos ? "" : trim(s.substr(colon + 1));

  if (kind == "number") {
    if (rest.empty()) throw ConfigError("state: use number:N (N >= 0)");
    const long n = parse_int(rest, "state");
    if (n < 0) throw ConfigError("state: number index must be >= 0");
    return StateSpec::number_state(static_cast<int>(n));
  }
  if (kind == "coherent") {
    if (rest.empty()) throw ConfigError("state: use coherent:MAG or coherent:MAG,DELTA");
    const auto comma = rest.find(',');
    const double mag =
        parse_real(comma == std::string::npos ? rest : rest.substr(0, comma), "state");
    const double delta =
        comma == std::string::npos ? 0.0 : parse_real(rest.substr(comma + 1), "state");
    if (mag < 0.0) throw ConfigError("state: coherent magnitude must be >= 0");
    return StateSpec::coherent(mag, delta);
  }
  throw ConfigError("state: unknown kind '" + kind +
                    "'; use number:N, coherent:MAG or coherent:MAG,DELTA");
}

void apply_key(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string k = trim(raw_key);
  for (char& c : k) {
    if (c == '-') c = '_';
  }
  if (k.empty()) throw ConfigError("empty option name");

  if (k == "model") {
    cfg.model = trim(value);
    return;
  }
  const bool expression = cfg.model == "expression";
  if (is_expression_key(k) && !expression) {
    if (k == "omega") {  // catalog models take omega as a plain number
      cfg.params["omega"] = parse_real(value, k);
      return;
    }
    throw ConfigError("'" + raw_key + "' applies to the expression model; model '" + cfg.model +
                      "' takes numeric parameters (see the catalog)");
  }

  if (k == "mass") {
    cfg.mass = trim(value);
  } else if (k == "omega") {
    if (cfg.omega_sq_seen) throw ConfigError("give omega or omega-sq, not both");
    cfg.omega_seen = true;
    cfg.omega_sq = "(" + trim(value) + ")^2";
  } else if (k == "omega_sq") {
    if (cfg.omega_seen) throw ConfigError("give omega or omega-sq, not both");
    cfg.omega_sq_seen = true;
    cfg.omega_sq = trim(value);
  } else if (k == "force") {
    cfg.force = trim(value);
    cfg.force_set = true;
  } else if (k == "t0") {
    cfg.t0 = parse_real(value, k);
  } else if (k == "t1") {
    cfg.t1 = parse_real(value, k);
  } else if (k == "dt") {
    cfg.dt = parse_real(value, k);
  } else if (k == "c1") {
    cfg.c1 = parse_real(value, k);
  } else if (k == "c2") {
    cfg.c2 = parse_real(value, k);
  } else if (k == "c3") {
    cfg.c3 = parse_real(value, k);
  } else if (k == "state") {
    cfg.state = parse_state(value);
  } else if (k == "beta0") {
    cfg.beta0 = trim(value);
  } else if (k == "theta_tol") {
    cfg.theta_tol = parse_real(value, k);
  } else if (k == "drift_tol") {
    cfg.drift_tol = parse_real(value, k);
  } else if (k == "fixed_panel") {
    cfg.fixed_panel = parse_real(value, k);
  } else if (k == "verify_tol") {
    cfg.verify_tol = parse_real(value, k);
  } else if (k == "ellipse_every") {
    const long n = parse_int(value, k);
    if (n < 0) throw ConfigError("ellipse-every must be >= 0");
    cfg.ellipse_every = static_cast<int>(n);
  } else if (k == "output") {
    cfg.output = trim(value);
  } else {
    // Catalog parameter; build_pipeline rejects leftovers for "expression".
    cfg.params[trim(raw_key)] = parse_real(value, raw_key);
  }
}

void apply_all(RunConfig& cfg, const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [key, value] : pairs) {
    if (trim(key) == "model") apply_key(cfg, key, value);
  }
  for (const auto& [key, value] : pairs) {
    if (trim(key) != "model") apply_key(cfg, key, value);
  }
}

std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[' && body.back() == ']') continue;  // section marker
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    pairs.emplace_back(key, value);
  }
  return pairs;
}

Pipeline build_pipeline(const RunConfig& cfg) {
  if (!(cfg.theta_tol > 0.0)) throw ConfigError("theta-tol must be positive");
  if (!(cfg.drift_tol > 0.0)) throw ConfigError("drift-tol must be positive");
  if (cfg.fixed_panel < 0.0) throw ConfigError("fixed-panel must be >= 0");

  Pipeline p;
  if (cfg.model == "expression") {
    if (!cfg.params.empty()) {
      throw ConfigError("unknown option '" + cfg.params.begin()->first +
                        "' for the expression model");
    }
    p.model.mass = parse_coefficient(cfg.mass, "mass");
    p.model.omega_sq = parse_coefficient(cfg.omega_sq, "omega-sq");
    p.model.force = parse_coefficient(cfg.force, "force");
    p.model.name = "expression";
  } else {
    p.model = catalog(cfg.model, cfg.params, cfg.t0, cfg.t1);
    if (cfg.force_set) p.model.force = parse_coefficient(cfg.force, "force");
  }
  p.model.t0 = cfg.t0;
  p.model.t1 = cfg.t1;
  p.model.frame_constants = {cfg.c1, cfg.c2, cfg.c3};
  p.model.validate();

  p.basis = solve_basis(p.model);
  p.frame.emplace(build_frame(p.basis, cfg.c1, cfg.c2, cfg.c3));

  if (trim(cfg.beta0) == "matched") {
    p.beta0 = beta0_matched(p.model, *p.frame);
  } else {
    p.beta0 = parse_complex(cfg.beta0, "beta0");
  }

  DriftConfig dc;
  dc.panel_tol = cfg.drift_tol;
  dc.fixed_panel = cfg.fixed_panel;
  dc.theta_tol = cfg.theta_tol;
  p.drift = drift(*p.frame, p.model, p.beta0, dc);
  p.state = cfg.state;
  return p;
}

std::vector<double> make_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t1 > t0)) throw ConfigError("t1 must exceed t0");
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (t > t1 + dt * 1e-9) break;
    grid.push_back(t);
  }
  return grid;
}

namespace {

void write_header(const RunConfig& cfg, const Pipeline& p, std::ostream& out) {
  out << "# lrinv " << kVersion << "\n";
  out << "# model: " << p.model.name << "\n";
  out << "# mass: " << p.model.mass.describe() << "\n";
  out << "# omega_sq: " << p.model.omega_sq.describe() << "\n";
  out << "# force: " << p.model.force.describe() << "\n";
  out << "# interval: t0=" << fmt(cfg.t0) << " t1=" << fmt(cfg.t1) << " dt=" << fmt(cfg.dt)
      << "\n";
  out << "# constants: c1=" << fmt(cfg.c1) << " c2=" << fmt(cfg.c2) << " c3=" << fmt(cfg.c3)
      << "\n";
  out << "# omega_I: " << fmt(p.frame->omega_inv()) << "\n";
  if (p.state.kind == StateSpec::Kind::number) {
    out << "# state: number n=" << p.state.n << "\n";
  } else {
    out << "# state: coherent magnitude=" << fmt(p.state.magnitude)
        << " delta=" << fmt(p.state.delta) << "\n";
  }
  out << "# beta0: " << fmt(p.beta0.real()) << " " << fmt(p.beta0.imag()) << "\n";
}

}  // namespace

void simulate(const RunConfig& cfg, std::ostream& out) {
  const Pipeline p = build_pipeline(cfg);
  const std::vector<double> grid = make_grid(cfg.t0, cfg.t1, cfg.dt);

  write_header(cfg, p, out);
  out << "t,q_mean,p_mean,var_q,var_p,cov_qp,theta,re_beta,im_beta,omega_I_sq,energy\n";

  std::vector<MomentRecord> records;
  records.reserve(grid.size());
  for (double t : grid) {
    const MomentRecord r = state_moments(p.model, *p.frame, *p.drift, p.state, t);
    records.push_back(r);
    const FramePoint g = p.frame->at(t);
    // Recomputed per row from the coefficients as a drift indicator; equals
    // omega_I^2 up to roundoff when the basis is healthy.
    const double wi2 = g.g_plus * g.g_minus - g.g_zero * g.g_zero;
    const std::complex<double> b = p.drift->beta(t);
    out << fmt(t) << ',' << fmt(r.q_mean) << ',' << fmt(r.p_mean) << ',' << fmt(r.var_q) << ','
        << fmt(r.var_p) << ',' << fmt(r.cov_qp) << ',' << fmt(p.drift->theta(t)) << ','
        << fmt(b.real()) << ',' << fmt(b.imag()) << ',' << fmt(wi2) << ',' << fmt(r.energy)
        << "\n";
  }

  if (cfg.ellipse_every > 0) {
    out << "# ellipses\n";
    out << "t,axis_major,axis_minor,tilt\n";
    for (std::size_t i = 0; i < records.size(); i += static_cast<std::size_t>(cfg.ellipse_every)) {
      const EllipseSpec e = ellipse(records[i]);
      out << fmt(records[i].t) << ',' << fmt(e.axis_major) << ',' << fmt(e.axis_minor) << ','
          << fmt(e.tilt) << "\n";
    }
  }
}

VerifyReport verify_run(const RunConfig& cfg, std::ostream& log) {
  const Pipeline p = build_pipeline(cfg);
  const std::vector<double> grid = make_grid(cfg.t0, cfg.t1, cfg.dt);

  const VerifyReport report =
      verify(p.model, *p.frame, *p.drift, p.state, grid, cfg.verify_tol);

  log << "verify model=" << p.model.name << " points=" << grid.size() << " t=[" << fmt(cfg.t0)
      << ", " << fmt(cfg.t1) << "]\n";
  for (const DeviationRow& row : report.rows) {
    std::array<char, 96> line{};
    std::snprintf(line.data(), line.size(), "  %-7s max scaled dev %.3e at t=%g\n",
                  row.quantity.c_str(), row.max_dev, row.at_t);
    log << line.data();
  }
  log << "worst " << fmt(report.worst) << " tol " << fmt(cfg.verify_tol) << " -> "
      << (report.pass ? "PASS" : "FAIL") << "\n";
  return report;
}

int sweep(const std::vector<std::string>& files, int jobs, std::ostream& log) {
  struct Item {
    std::string message;
    bool ok = false;
  };
  std::vector<Item> items(files.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      const std::string& file = files[i];
      try {
        RunConfig cfg;
        apply_all(cfg, load_config_file(file));
        std::string out_path = cfg.output;
        if (out_path.empty()) {
          out_path = std::filesystem::path(file).replace_extension(".csv").string();
        }
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot open output file '" + out_path + "'");
        simulate(cfg, out);
        const std::size_t rows = make_grid(cfg.t0, cfg.t1, cfg.dt).size();
        items[i] = {file + " -> " + out_path + " (" + std::to_string(rows) + " rows)", true};
      } catch (const std::exception& e) {
        items[i] = {file + ": " + e.what(), false};
      }
    }
  };

  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  int failures = 0;
  for (const Item& item : items) {
    log << (item.ok ? "ok   " : "fail ") << item.message << "\n";
    if (!item.ok) ++failures;
  }
  return failures;
}

std::string catalog_text() {
  std::ostringstream out;
  out << "models (plus \"expression\" for arbitrary coefficients of t):\n";
  for (const CatalogEntry& e : catalog_entries()) {
    out << "  " << e.name << "\n    " << e.summary << "\n    parameters: ";
    for (std::size_t i = 0; i < e.parameters.size(); ++i) {
      if (i) out << ", ";
      out << e.parameters[i];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace lrinv
