#include "pberg/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pberg {

namespace {

double parse_real(const std::string& s, const std::string& context) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' in '" + context + "'");
  }
  if (used != s.size()) throw ConfigError("trailing characters in number '" + s + "' in '" + context + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i') return parse_real(s, raw);
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t pos = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      pos = k;
      break;
    }
  if (pos == std::string::npos) return {0.0, parse_real(body, raw)};
  return {parse_real(body.substr(0, pos), raw), parse_real(body.substr(pos), raw)};
}

Point parse_point(const std::string& s, int dimension) {
  const std::vector<std::string> parts = split(s, ',');
  if (int(parts.size()) != dimension)
    throw ConfigError("point '" + s + "' needs " + std::to_string(dimension) + " coordinate(s)");
  Point z{};
  for (int j = 0; j < dimension; ++j) z[j] = parse_complex(parts[j]);
  return z;
}

std::vector<Point> grid_points(const std::string& spec, const Domain& d) {
  const std::vector<std::string> parts = split(spec, ':');
  const int n = d.dimension();
  std::vector<Point> out;
  auto integer = [&](const std::string& s) {
    const double v = parse_real(s, spec);
    if (v < 1 || v != std::floor(v)) throw ConfigError("grid counts must be positive integers in '" + spec + "'");
    return int(v);
  };
  if (parts.size() == 3 && parts[0] == "radial") {
    const int N = integer(parts[1]);
    const double rmax = parse_real(parts[2], spec);
    for (int k = 0; k < N; ++k) {
      const double r = N == 1 ? 0.0 : rmax * k / (N - 1);
      out.push_back(n == 1 ? Point{r, 0.0} : Point{r, 0.5 * r});
    }
  } else if (parts.size() == 4 && parts[0] == "polar") {
    const int nr = integer(parts[1]), nt = integer(parts[2]);
    const double rmax = parse_real(parts[3], spec);
    for (int a = 1; a <= nr; ++a)
      for (int b = 0; b < nt; ++b) {
        const double r = rmax * a / nr, t = 2.0 * std::numbers::pi * b / nt;
        out.push_back(n == 1 ? Point{std::polar(r, t), 0.0} : Point{std::polar(r, t), std::polar(0.5 * r, -2.0 * t)});
      }
  } else {
    throw ConfigError("unknown grid spec '" + spec + "' (expected radial:N:RMAX or polar:NR:NT:RMAX)");
  }
  return out;
}

int default_degree(const Domain& d) { return d.dimension() == 1 ? 32 : 10; }

int RunConfig::degree() const {
  if (!degrees.empty()) return degrees.back();
  return default_degree(make_domain(parse_descriptor(domain)));
}

double RunConfig::tolerance(const std::string& check, double fallback) const {
  const auto it = tolerances.find(check);
  return it == tolerances.end() ? fallback : it->second;
}

std::vector<Point> RunConfig::all_points() const {
  std::vector<Point> out = points;
  if (!grid.empty()) {
    const std::vector<Point> g = grid_points(grid, make_domain(parse_descriptor(domain)));
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

Json RunConfig::to_json() const {
  const int n = make_domain(parse_descriptor(domain)).dimension();
  Json j;
  j["domain"] = domain;
  j["degree"] = degrees;
  j["quad_order"] = quad_order;
  j["p"] = p_values;
  Json pts = Json::array();
  for (const Point& z : points) pts.push_back(pberg::to_json(z, n));
  j["points"] = pts;
  j["grid"] = grid;
  j["boundary_margin"] = boundary_margin;
  j["checks"] = checks;
  Json tol = Json::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  j["tolerances"] = tol;
  j["seed"] = seed;
  j["samples"] = samples;
  Json pr = Json::array();
  for (const Point& z : probe) pr.push_back(pberg::to_json(z, n));
  j["probe"] = pr;
  j["direction"] = pberg::to_json(direction, n);
  return j;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::vector<std::string> known{"domain", "degree", "quad_order", "p", "points", "grid",
                                              "boundary_margin", "checks", "tolerances", "out", "seed",
                                              "workers", "samples", "probe", "direction"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("unknown configuration key '" + it.key() + "'");
  RunConfig c;
  try {
    if (j.contains("domain")) c.domain = j.at("domain").get<std::string>();
    const int n = make_domain(parse_descriptor(c.domain)).dimension();
    auto point = [&](const Json& v) {
      if (v.is_string()) return parse_point(v.get<std::string>(), n);
      if (v.is_number()) return Point{v.get<double>(), 0.0};
      throw ConfigError("points must be strings such as \"0.5+0.1i\" or \"0.3,0.2i\"");
    };
    if (j.contains("degree")) {
      const Json& d = j.at("degree");
      c.degrees = d.is_array() ? d.get<std::vector<int>>() : std::vector<int>{d.get<int>()};
    }
    if (j.contains("quad_order")) c.quad_order = j.at("quad_order").get<int>();
    if (j.contains("p")) {
      const Json& p = j.at("p");
      c.p_values = p.is_array() ? p.get<std::vector<double>>() : std::vector<double>{p.get<double>()};
    }
    if (j.contains("points"))
      for (const Json& v : j.at("points")) c.points.push_back(point(v));
    if (j.contains("probe"))
      for (const Json& v : j.at("probe")) c.probe.push_back(point(v));
    if (j.contains("direction")) c.direction = point(j.at("direction"));
    if (j.contains("grid")) c.grid = j.at("grid").get<std::string>();
    if (j.contains("boundary_margin")) c.boundary_margin = j.at("boundary_margin").get<double>();
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("tolerances"))
      for (auto it = j.at("tolerances").begin(); it != j.at("tolerances").end(); ++it)
        c.tolerances[it.key()] = it.value().get<double>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open configuration file '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("configuration file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate_fields(const RunConfig& c) {
  Domain d;
  try {
    d = make_domain(parse_descriptor(c.domain));
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  for (int deg : c.degrees)
    if (deg < 1 || deg > 200) throw ConfigError("degree must lie in [1, 200]");
  if (c.quad_order < 0) throw ConfigError("quad_order must be nonnegative");
  if (c.p_values.empty()) throw ConfigError("at least one p value is required");
  for (double p : c.p_values)
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("p values must be finite and >= 1");
  if (c.checks.empty()) throw ConfigError("empty check list");
  for (const auto& [k, v] : c.tolerances)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerance '" + k + "' must be positive");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (!(c.boundary_margin >= 0.0)) throw ConfigError("boundary_margin must be nonnegative");
  try {
    for (const Point& z : c.all_points())
      if (!d.contains(z)) throw ConfigError("point " + format_point(z, d.dimension()) + " is not inside " + d.name());
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  for (const Point& z : c.probe)
    if (!d.contains(z)) throw ConfigError("probe point " + format_point(z, d.dimension()) + " is not inside " + d.name());
  if (norm(c.direction) == 0.0) throw ConfigError("direction must be nonzero");
}

int default_workers() {
  const char* env = std::getenv("PBERG_WORKERS");
  if (!env) return 1;
  const int w = std::atoi(env);
  return w >= 1 ? w : 1;
}

}  // namespace pberg
