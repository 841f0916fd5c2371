#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lrinv/run.hpp"

namespace {

struct CommonOpts {
  std::string config;
  // Flag overrides in insertion order; applied after the config file so the
  // command line wins.
  std::vector<std::pair<std::string, std::string>> pairs;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config, "key = value file applied before flags");
  const auto kv = [&c](const char* key) {
    return [&c, key](const std::string& v) { c.pairs.emplace_back(key, v); };
  };
  cmd->add_option_function<std::string>("--model", kv("model"),
                                        "expression (default) or a catalog model name");
  cmd->add_option_function<std::string>("--mass", kv("mass"), "M(t), expression in t");
  cmd->add_option_function<std::string>("--omega", kv("omega"),
                                        "frequency; squared internally (expression model), "
                                        "numeric parameter otherwise");
  cmd->add_option_function<std::string>("--omega-sq", kv("omega-sq"),
                                        "squared frequency, expression in t (may go negative)");
  cmd->add_option_function<std::string>("--force", kv("force"), "drive F(t), expression in t");
  cmd->add_option_function<std::string>("--t0", kv("t0"), "start time");
  cmd->add_option_function<std::string>("--t1", kv("t1"), "end time");
  cmd->add_option_function<std::string>("--dt", kv("dt"), "output grid spacing");
  cmd->add_option_function<std::string>("--c1", kv("c1"), "invariant constant c1 (> 0)");
  cmd->add_option_function<std::string>("--c2", kv("c2"), "invariant constant c2");
  cmd->add_option_function<std::string>("--c3", kv("c3"), "invariant constant c3");
  cmd->add_option_function<std::string>(
      "--state", kv("state"), "number:N | coherent:MAG[,DELTA]  (default coherent:0,0)");
  cmd->add_option_function<std::string>("--beta0", kv("beta0"),
                                        "matched (default) | RE[,IM]: initial drive amplitude");
  cmd->add_option_function<std::string>("--theta-tol", kv("theta-tol"),
                                        "phase quadrature tolerance");
  cmd->add_option_function<std::string>("--drift-tol", kv("drift-tol"),
                                        "drive quadrature tolerance");
  cmd->add_option_function<std::string>(
      "--fixed-panel", kv("fixed-panel"),
      "fixed Simpson panel width for the drive quadrature (0 = adaptive)");
  const auto* params = "PARAM=VALUE catalog parameter (repeatable)";
  cmd->add_option_function<std::vector<std::string>>(
      "--set",
      [&c](const std::vector<std::string>& kvs) {
        for (const std::string& s : kvs) {
          const auto eq = s.find('=');
          if (eq == std::string::npos || eq == 0) {
            throw CLI::ValidationError("--set", "expected PARAM=VALUE, got '" + s + "'");
          }
          c.pairs.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        }
      },
      params);
}

std::vector<std::pair<std::string, std::string>> gather(const CommonOpts& c) {
  std::vector<std::pair<std::string, std::string>> all;
  if (!c.config.empty()) all = lrinv::load_config_file(c.config);
  all.insert(all.end(), c.pairs.begin(), c.pairs.end());
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-form quantum moments of a driven oscillator via its quadratic invariant"};
  app.set_version_flag("--version", std::string("lrinv ") + lrinv::kVersion);
  app.require_subcommand(1);

  CommonOpts sim_opts;
  CLI::App* sim = app.add_subcommand("simulate", "tabulate moments over a time grid (CSV)");
  add_common(sim, sim_opts);
  std::string output;
  sim->add_option("-o,--output", output, "output file (default: stdout)");
  int ellipse_every = 0;
  sim->add_option("--ellipse-every", ellipse_every,
                  "append covariance-ellipse rows every k-th grid point");
  std::vector<std::string> sweep_files;
  sim->add_option("--sweep", sweep_files, "run each config file as an independent job");
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  sim->add_option("--jobs", jobs, "parallel jobs for --sweep");

  CommonOpts ver_opts;
  CLI::App* ver = app.add_subcommand("verify", "compare closed-form moments against direct "
                                               "numerical integration");
  add_common(ver, ver_opts);
  ver->add_option_function<std::string>(
      "--verify-tol", [&ver_opts](const std::string& v) { ver_opts.pairs.emplace_back("verify-tol", v); },
      "scaled-deviation threshold (default 1e-6)");

  CLI::App* cat = app.add_subcommand("catalog", "list built-in models and their parameters");
  cat->add_subcommand("list", "same as bare catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      if (!sweep_files.empty()) {
        if (!sim_opts.config.empty() || !sim_opts.pairs.empty()) {
          throw lrinv::ConfigError("--sweep jobs take all settings from their config files");
        }
        const int failures = lrinv::sweep(sweep_files, jobs, std::cout);
        return failures == 0 ? 0 : 1;
      }
      lrinv::RunConfig cfg;
      lrinv::apply_all(cfg, gather(sim_opts));
      if (ellipse_every > 0) cfg.ellipse_every = ellipse_every;
      if (!output.empty()) cfg.output = output;
      if (!cfg.output.empty()) {
        std::ofstream out(cfg.output);
        if (!out) throw lrinv::ConfigError("cannot open output file '" + cfg.output + "'");
        lrinv::simulate(cfg, out);
      } else {
        lrinv::simulate(cfg, std::cout);
      }
      return 0;
    }
    if (ver->parsed()) {
      lrinv::RunConfig cfg;
      lrinv::apply_all(cfg, gather(ver_opts));
      const lrinv::VerifyReport report = lrinv::verify_run(cfg, std::cout);
      return report.pass ? 0 : 1;
    }
    if (cat->parsed()) {
      std::cout << lrinv::catalog_text();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
