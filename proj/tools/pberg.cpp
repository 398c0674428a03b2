#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pberg/runner.hpp"

using namespace pberg;

namespace {

struct Flags {
  std::string config, domain, grid, out, suite = "disc-core";
  std::vector<double> p;
  std::vector<std::string> z, probe, checks;
  std::vector<int> degree;
  int quad_order = 0, workers = 0;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  double boundary_margin = 0.0;
  std::string direction;
};

struct Command {
  CLI::App* app = nullptr;
  std::vector<std::string> checks;  // default check selection
  std::map<std::string, CLI::Option*> opts;
};

void add_common(Command& cmd, Flags& f) {
  CLI::App* a = cmd.app;
  cmd.opts["config"] = a->add_option("--config", f.config, "JSON run configuration; flags override it");
  cmd.opts["domain"] = a->add_option("--domain", f.domain, "unit_disc, disc:R, bidisc, ball2, reinhardt:lp:t");
  cmd.opts["p"] = a->add_option("--p", f.p, "exponents, comma separated")->delimiter(',');
  cmd.opts["z"] = a->add_option("--z", f.z, "point, coordinates separated by commas; repeat for more points");
  cmd.opts["probe"] = a->add_option("--probe", f.probe, "probe point zeta; repeatable");
  cmd.opts["direction"] = a->add_option("--direction", f.direction, "direction X or u");
  cmd.opts["degree"] = a->add_option("--degree", f.degree, "basis degree(s), comma separated")->delimiter(',');
  cmd.opts["quad-order"] = a->add_option("--quad-order", f.quad_order, "radial quadrature order");
  cmd.opts["grid"] = a->add_option("--grid", f.grid, "radial:N:RMAX or polar:NR:NT:RMAX");
  cmd.opts["boundary-margin"] = a->add_option("--boundary-margin", f.boundary_margin, "minimum boundary distance");
  cmd.opts["checks"] = a->add_option("--checks", f.checks, "checks to run, comma separated")->delimiter(',');
  cmd.opts["samples"] = a->add_option("--samples", f.samples, "samples for randomized sweeps");
  cmd.opts["seed"] = a->add_option("--seed", f.seed, "seed for randomized sweeps");
  cmd.opts["out"] = a->add_option("--out", f.out, "output directory for summary.json, CSV tables, digest.txt");
  cmd.opts["workers"] = a->add_option("--workers", f.workers, "worker threads (default PBERG_WORKERS or 1)");
}

bool set(const Command& c, const std::string& name) { return c.opts.at(name)->count() > 0; }

RunConfig build_config(const Command& cmd, const Flags& f, const std::map<std::string, double>& tolerances) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (f.config.empty()) {
    c.checks = cmd.checks;
    c.workers = default_workers();
  } else if (c.checks.empty()) {
    c.checks = cmd.checks;
  }
  if (set(cmd, "domain")) c.domain = f.domain;
  const int n = make_domain(parse_descriptor(c.domain)).dimension();
  auto points = [&](const std::vector<std::string>& raw) {
    std::vector<Point> out;
    for (const auto& s : raw) {
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ';')) out.push_back(parse_point(item, n));
    }
    return out;
  };
  if (set(cmd, "p")) c.p_values = f.p;
  if (set(cmd, "z")) c.points = points(f.z);
  if (set(cmd, "probe")) c.probe = points(f.probe);
  if (set(cmd, "direction")) c.direction = parse_point(f.direction, n);
  if (set(cmd, "degree")) c.degrees = f.degree;
  if (set(cmd, "quad-order")) c.quad_order = f.quad_order;
  if (set(cmd, "grid")) c.grid = f.grid;
  if (set(cmd, "boundary-margin")) c.boundary_margin = f.boundary_margin;
  if (set(cmd, "checks")) {
    c.checks.clear();
    for (const auto& s : f.checks)
      if (!s.empty()) c.checks.push_back(s);
  }
  if (set(cmd, "samples")) c.samples = f.samples;
  if (set(cmd, "seed")) c.seed = f.seed;
  if (set(cmd, "out")) c.out = f.out;
  if (set(cmd, "workers")) c.workers = f.workers;
  for (const auto& [k, v] : tolerances) c.tolerances[k] = v;
  return c;
}

/// Pulls --tol.<name> VALUE and --tol.<name>=VALUE out of argv.
std::map<std::string, double> take_tolerances(std::vector<std::string>& args) {
  std::map<std::string, double> tol;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--tol.", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string name = a.substr(6), value;
    const auto eq = name.find('=');
    if (eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else if (i + 1 < args.size()) {
      value = args[++i];
    } else {
      throw ConfigError("missing value for " + a);
    }
    if (name.empty()) throw ConfigError("empty tolerance name in " + a);
    try {
      std::size_t used = 0;
      tol[name] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ConfigError("bad tolerance value '" + value + "' for " + name);
    }
  }
  args = rest;
  return tol;
}

void print_table(const Table& t) {
  std::cout << to_csv(t);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::map<std::string, double> tolerances;
  try {
    tolerances = take_tolerances(args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"pberg: numerical laboratory for p-Bergman kernels"};
  app.require_subcommand(1);
  Flags f;
  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help, std::vector<std::string> checks) {
    Command c;
    c.app = app.add_subcommand(name, help);
    c.checks = std::move(checks);
    add_common(c, f);
    commands.push_back(std::move(c));
    return commands.size() - 1;
  };
  add("kernel", "diagonal kernel K_p(z) with the closed-form comparison", {"kernel_oracle"});
  add("offdiag", "off-diagonal kernel K_p(zeta, z) and the reproducing residual", {"reproducing"});
  add("gradcheck", "finite differences against the gradient identity", {"gradient_identity"});
  add("holder", "Holder exponent fits", {"holder"});
  add("levi", "Levi form of log K_p against the extremal bound", {"levi"});
  add("ineq", "randomized sweeps of the elementary inequalities", {"inequalities"});
  add("sweep-p", "monotonicity and modulus of continuity in p", {"p_sweep"});
  add("weighted", "weighted Bergman identity and zero-free minimizers", {"weighted_identity", "zero_free"});
  add("reinhardt", "series kernel and zero atlas on complete Reinhardt domains", {"series_atlas"});
  add("run", "run the checks selected in the configuration", {});
  add("sweep", "grid sweep: one CSV row per (z, p)", {"kernel_oracle"});
  const std::size_t verify_idx = add("verify", "named verification suite", {});
  commands[verify_idx].app->add_option("--suite", f.suite, "disc-core or full");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const Command& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      const std::string name = cmd.app->get_name();
      RunConfig c = build_config(cmd, f, tolerances);
      RunOutcome r;
      if (name == "verify") {
        r = verify(f.suite, c);
      } else if (name == "sweep") {
        r = sweep(c);
        for (const auto& t : r.bundle.tables) print_table(t);
      } else {
        r = run(c);
        if (name == "kernel" || name == "offdiag")
          for (const auto& t : r.bundle.tables) print_table(t);
      }
      std::cout << digest_text(r.bundle);
      return r.exit_code;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
