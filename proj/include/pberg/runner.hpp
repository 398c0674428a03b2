#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pberg/config.hpp"
#include "pberg/report.hpp"

namespace pberg {

struct CheckInfo {
  std::string name;
  std::string anchor;
  std::string summary;
};

/// Registered checks in execution order.
const std::vector<CheckInfo>& check_catalog();
const CheckInfo* find_check(const std::string& name);

/// Closed-form K_p(z), valid for every p >= 1, on discs, the bidisc and the
/// unit ball; empty elsewhere.
std::optional<double> closed_form_kernel(const Domain& d, const Point& z);
/// Gradient of the closed form in real coordinates x_1..x_n, y_1..y_n.
std::optional<std::vector<double>> closed_form_gradient(const Domain& d, const Point& z);

/// Points used when the configuration lists none.
std::vector<Point> default_points(const Domain& d);
/// Probe points for off-diagonal and sup comparisons.
std::vector<Point> default_probe(const Domain& d);

/// Every selected check must be runnable from the configuration; throws
/// ConfigError otherwise. Runs before any solve.
void validate(const RunConfig& c);

struct RunOutcome {
  ReportBundle bundle;
  int exit_code = 0;  // 0 all pass, 1 some FAIL, 3 solver hard failure
};

/// Runs the selected checks and writes the bundle when `c.out` is set.
RunOutcome run(const RunConfig& c);

/// One CSV row per (z, p) over the configured grid and points.
RunOutcome sweep(const RunConfig& c);

/// Named verification suites: "disc-core" and "full".
std::vector<std::string> suite_names();
std::vector<RunConfig> suite_configs(const std::string& suite);
/// Runs a suite; `out`, `workers` and `seed` are taken from `base`.
RunOutcome verify(const std::string& suite, const RunConfig& base);

}  // namespace pberg
