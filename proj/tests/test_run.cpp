#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lrinv/run.hpp"

using namespace lrinv;

namespace {

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> headers;                // one per section
  std::vector<std::vector<std::vector<double>>> sections;  // rows of cells
};

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  int section = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line);
      continue;
    }
    if (line.find_first_not_of("0123456789+-.eE,") != std::string::npos) {
      t.headers.push_back(line);  // column names
      t.sections.emplace_back();
      ++section;
      continue;
    }
    REQUIRE(section >= 0);
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    t.sections[static_cast<std::size_t>(section)].push_back(std::move(row));
  }
  return t;
}

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& contents) : path(name) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("scalar parsers") {
  CHECK(parse_real("1/3", "x") == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(parse_real("2.5e-1", "x") == doctest::Approx(0.25));
  CHECK(parse_real(" -4 ", "x") == doctest::Approx(-4.0));
  CHECK(parse_real("5/1.4142135623730951", "x") ==
        doctest::Approx(3.5355339059327378).epsilon(1e-15));
  CHECK_THROWS_AS(parse_real("abc", "x"), ConfigError);
  CHECK_THROWS_AS(parse_real("1/0", "x"), ConfigError);
  CHECK_THROWS_AS(parse_real("", "x"), ConfigError);

  CHECK(parse_complex("2", "x") == std::complex<double>(2.0, 0.0));
  CHECK(parse_complex("1,-0.5", "x") == std::complex<double>(1.0, -0.5));

  const StateSpec n3 = parse_state("number:3");
  CHECK(n3.kind == StateSpec::Kind::number);
  CHECK(n3.n == 3);
  const StateSpec c1 = parse_state("coherent:2.5");
  CHECK(c1.kind == StateSpec::Kind::coherent);
  CHECK(c1.magnitude == doctest::Approx(2.5));
  CHECK(c1.delta == 0.0);
  const StateSpec c2 = parse_state("coherent:5/1.4142135623730951 , 0.5");
  CHECK(c2.magnitude == doctest::Approx(3.5355339059327378));
  CHECK(c2.delta == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_state("number:-1"), ConfigError);
  CHECK_THROWS_AS(parse_state("squeezed:1"), ConfigError);
  CHECK_THROWS_AS(parse_state("coherent:"), ConfigError);
  CHECK_THROWS_AS(parse_state("coherent:-2"), ConfigError);
}

TEST_CASE("option keys: spelling, model-dependent meaning, conflicts") {
  RunConfig a;
  apply_key(a, "theta-tol", "1e-9");
  CHECK(a.theta_tol == doctest::Approx(1e-9));
  apply_key(a, "theta_tol", "1e-8");
  CHECK(a.theta_tol == doctest::Approx(1e-8));

  // On the expression model, omega is an expression and gets squared.
  RunConfig b;
  apply_key(b, "omega", "2*t");
  CHECK(b.omega_sq == "(2*t)^2");
  CHECK_THROWS_AS(apply_key(b, "omega-sq", "4"), ConfigError);

  RunConfig c;
  apply_key(c, "omega-sq", "4");
  CHECK_THROWS_AS(apply_key(c, "omega", "2"), ConfigError);

  // On a catalog model, omega is a numeric parameter; apply_all guarantees
  // the model key lands first no matter the written order.
  RunConfig d;
  apply_all(d, {{"omega", "2"}, {"model", "constant"}, {"m", "1"}, {"F", "0"}});
  CHECK(d.model == "constant");
  CHECK(d.params.at("omega") == doctest::Approx(2.0));
  CHECK(d.params.at("m") == doctest::Approx(1.0));

  RunConfig e;
  apply_key(e, "model", "pulsating");
  CHECK_THROWS_AS(apply_key(e, "mass", "2*t"), ConfigError);

  RunConfig f;
  CHECK_THROWS_AS(apply_key(f, "ellipse-every", "-2"), ConfigError);
}

TEST_CASE("grids") {
  CHECK(make_grid(0.0, 10.0, 0.1).size() == 101);
  CHECK(make_grid(0.0, 40.0, 0.05).size() == 801);
  const auto g = make_grid(0.0, 1.0, 0.1);
  CHECK(g.size() == 11);
  CHECK(g.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 0.1), ConfigError);
}

TEST_CASE("pipeline construction and its failure modes") {
  RunConfig cfg;
  cfg.model = "pulsating";
  cfg.params = {{"m0", 1.0}, {"gamma", 0.1}, {"mu", 4.0}, {"nu", 1.0 / 3.0}, {"Omega", 1.0}};
  cfg.force = "sin(t)";
  cfg.force_set = true;
  cfg.t1 = 40.0;
  cfg.state = parse_state("coherent:5/1.4142135623730951,0");
  const Pipeline p = build_pipeline(cfg);
  CHECK(p.model.name == "pulsating");
  CHECK(p.frame->omega_inv() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(p.beta0) < 1e-15);  // matched, and the drive starts at zero

  RunConfig unknown;
  unknown.model = "warp";
  CHECK_THROWS_AS(build_pipeline(unknown), ConfigError);

  RunConfig stray;
  stray.params = {{"m0", 1.0}};
  CHECK_THROWS_AS(build_pipeline(stray), ConfigError);

  RunConfig missing;
  missing.model = "pulsating";
  missing.params = {{"m0", 1.0}};
  CHECK_THROWS_AS(build_pipeline(missing), ConfigError);

  RunConfig empty_window;
  empty_window.t0 = 0.0;
  empty_window.t1 = 0.0;
  CHECK_THROWS_AS(build_pipeline(empty_window), ConfigError);

  RunConfig bad_expr;
  bad_expr.force = "1 + ";
  try {
    build_pipeline(bad_expr);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("force") != std::string::npos);
    CHECK(msg.find("offset 4") != std::string::npos);
  }
}

TEST_CASE("config files") {
  const TempFile file("test_run_config.tmp", R"([run]
# demo configuration
model = pulsating
m0 = 1
gamma = 0.1
mu = 4
nu = 1/3          ; thirds stay exact
Omega = 1
force = sin(t)
t0 = 0
t1 = 40
dt = 0.05
state = coherent:5/1.4142135623730951,0
)");
  RunConfig cfg;
  apply_all(cfg, load_config_file(file.path));
  CHECK(cfg.model == "pulsating");
  CHECK(cfg.params.at("nu") == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(cfg.dt == doctest::Approx(0.05));
  CHECK(cfg.state.magnitude == doctest::Approx(3.5355339059327378));
  const Pipeline p = build_pipeline(cfg);
  CHECK(p.model.force.describe() == "sin(t)");

  const TempFile broken("test_run_broken.tmp", "model = constant\nno equals here\n");
  try {
    load_config_file(broken.path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config_file("does_not_exist.tmp"), ConfigError);
}

TEST_CASE("simulate writes a parseable table") {
  RunConfig cfg;
  cfg.model = "constant";
  cfg.params = {{"m", 1.0}, {"omega", 1.0}, {"F", 0.0}};
  cfg.t1 = 1.0;
  cfg.dt = 0.5;
  cfg.ellipse_every = 1;
  std::ostringstream out;
  simulate(cfg, out);

  const Table t = parse_csv(out.str());
  REQUIRE(!t.comments.empty());
  CHECK(t.comments.front().rfind("# lrinv 0.1.0", 0) == 0);
  REQUIRE(t.headers.size() == 2);
  CHECK(t.headers[0] ==
        "t,q_mean,p_mean,var_q,var_p,cov_qp,theta,re_beta,im_beta,omega_I_sq,energy");
  CHECK(t.headers[1] == "t,axis_major,axis_minor,tilt");
  REQUIRE(t.sections[0].size() == 3);
  REQUIRE(t.sections[1].size() == 3);

  for (const auto& row : t.sections[0]) {
    CHECK(row.size() == 11);
    CHECK(row[3] == doctest::Approx(0.5).epsilon(1e-12));   // var_q
    CHECK(row[9] == doctest::Approx(1.0).epsilon(1e-12));   // omega_I_sq
    CHECK(row[10] == doctest::Approx(0.5).epsilon(1e-12));  // vacuum energy
  }
  for (const auto& row : t.sections[1]) {
    CHECK(row[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(row[2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  }
}

TEST_CASE("verify_run reports and passes on an honest pipeline") {
  RunConfig cfg;
  cfg.model = "constant";
  cfg.params = {{"m", 1.0}, {"omega", 1.0}, {"F", 1.0}};
  cfg.t1 = 5.0;
  cfg.dt = 0.25;
  cfg.state = parse_state("coherent:1,0.4");
  std::ostringstream log;
  const VerifyReport report = verify_run(cfg, log);
  CHECK(report.pass);
  CHECK(log.str().find("PASS") != std::string::npos);
  CHECK(log.str().find("q_mean") != std::string::npos);
}

TEST_CASE("sweep runs config files in parallel and reports failures") {
  const TempFile good_a("sweep_a.tmp", "model = constant\nm = 1\nomega = 1\nF = 0\n"
                                       "t1 = 1\ndt = 0.5\noutput = sweep_a_out.csv\n");
  const TempFile good_b("sweep_b.tmp", "model = constant\nm = 2\nomega = 1\nF = 0\n"
                                       "t1 = 1\ndt = 0.5\noutput = sweep_b_out.csv\n");
  const TempFile bad("sweep_bad.tmp", "model = constant\nm = -1\nomega = 1\nF = 0\n");

  std::ostringstream log;
  const int failures = sweep({good_a.path, good_b.path, bad.path}, 2, log);
  CHECK(failures == 1);
  CHECK(log.str().find("fail " + bad.path) != std::string::npos);
  CHECK(log.str().find("sweep_a_out.csv (3 rows)") != std::string::npos);

  std::ifstream produced("sweep_a_out.csv");
  CHECK(produced.good());
  std::remove("sweep_a_out.csv");
  std::remove("sweep_b_out.csv");
}
