#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pberg/domain.hpp"
#include "pberg/report.hpp"

namespace pberg {

/// Invalid run configuration; maps to exit status 2.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct RunConfig {
  std::string domain = "unit_disc";
  std::vector<int> degrees;           // empty: per-domain default
  int quad_order = 0;                 // 0: default for the degree
  std::vector<double> p_values{2.0};
  std::vector<Point> points;
  std::string grid;                   // "radial:N:RMAX" or "polar:NR:NT:RMAX"
  double boundary_margin = 0.0;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  std::string out;
  std::uint64_t seed = 1;
  int workers = 1;
  std::size_t samples = 100000;       // randomized sweeps
  std::vector<Point> probe;           // zeta points for off-diagonal quantities
  Point direction{1.0, 0.0};          // X for directional checks

  int degree() const;
  double tolerance(const std::string& check, double fallback) const;
  /// Explicit points followed by the grid points.
  std::vector<Point> all_points() const;
  Json to_json() const;
};

/// Default degree used by the solvers for a domain.
int default_degree(const Domain& d);

/// "0.5", "0.3-0.2i", "-i", "2e-3+1e-2i".
cplx parse_complex(const std::string& s);
/// Comma separated complex coordinates, one per dimension.
Point parse_point(const std::string& s, int dimension);

std::vector<Point> grid_points(const std::string& spec, const Domain& d);

/// Reads a JSON configuration file.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const Json& j);

/// Generic field checks; check-specific preconditions live with the checks.
void validate_fields(const RunConfig& c);

/// Worker count from PBERG_WORKERS, or 1.
int default_workers();

}  // namespace pberg
