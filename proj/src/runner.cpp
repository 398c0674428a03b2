#include "pberg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>

#include "pberg/inequality.hpp"
#include "pberg/parallel.hpp"
#include "pberg/regularity.hpp"
#include "pberg/reinhardt.hpp"
#include "pberg/weighted.hpp"

namespace pberg {

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog{
      {"kernel_oracle", "diagonal kernel, closed form on model domains", "K_p(z) against the closed form"},
      {"reproducing", "reproducing formula", "f(z) against the dual pairing with K_p(., z)"},
      {"gradient_identity", "first derivatives of K_p", "finite differences against p Re K d m_p"},
      {"holder", "Holder regularity of K_p", "log-log slopes of gradient and kernel differences"},
      {"levi", "Levi form of log K_p", "Richardson Levi form against the extremal bound"},
      {"inequalities", "elementary inequalities", "randomized sweeps of the scalar inequalities"},
      {"hat_h_lemma", "kernel-difference energy", "forms of H_p, integral lower bounds, ratio stability"},
      {"weighted_identity", "K_p as a weighted Bergman kernel", "weight |m_p|^{p-2} reproduces K_p"},
      {"p_sweep", "dependence on the exponent", "monotonicity and modulus of continuity in p"},
      {"zero_free", "zero-free minimizers", "m_s = m_p^{p/s} and m_2 = m_{2k}^k"},
      {"series_atlas", "Reinhardt series kernel", "series against Gram kernel, windings, zero atlas"},
      {"p1_limit", "limit p -> 1", "Cauchy behaviour in p and the scalar Borel-Caratheodory bound"},
      {"boundary_experiment", "zeros of K_2 reaching the boundary", "exploratory boundary scan"},
  };
  return catalog;
}

const CheckInfo* find_check(const std::string& name) {
  for (const auto& c : check_catalog())
    if (c.name == name) return &c;
  return nullptr;
}

std::optional<double> closed_form_kernel(const Domain& d, const Point& z) {
  const double R = d.radius();
  auto disc = [&](cplx w) {
    const double g = R * R - std::norm(w);
    return R * R / (std::numbers::pi * g * g);
  };
  switch (d.kind()) {
    case DomainKind::unit_disc:
    case DomainKind::disc: return disc(z[0]);
    case DomainKind::bidisc: return disc(z[0]) * disc(z[1]);
    case DomainKind::ball2: {
      const double g = 1.0 - std::norm(z[0]) - std::norm(z[1]);
      return 2.0 / (std::numbers::pi * std::numbers::pi * g * g * g);
    }
    case DomainKind::reinhardt_radial:
      if (d.profile() && d.profile()->analytic() && d.profile()->exponent() == 2.0) {
        const double g = 1.0 - std::norm(z[0]) - std::norm(z[1]);
        return 2.0 / (std::numbers::pi * std::numbers::pi * g * g * g);
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> closed_form_gradient(const Domain& d, const Point& z) {
  const auto K = closed_form_kernel(d, z);
  if (!K) return std::nullopt;
  const int n = d.dimension();
  std::vector<double> g(2 * n);
  // d/dx of a power of the defining function
  auto fill = [&](int j, double factor) {
    g[j] = factor * z[j].real();
    g[n + j] = factor * z[j].imag();
  };
  const double R = d.radius();
  if (d.kind() == DomainKind::unit_disc || d.kind() == DomainKind::disc || d.kind() == DomainKind::bidisc) {
    for (int j = 0; j < n; ++j) fill(j, *K * 4.0 / (R * R - std::norm(z[j])));
  } else {
    const double h = 1.0 - std::norm(z[0]) - std::norm(z[1]);
    for (int j = 0; j < n; ++j) fill(j, *K * 6.0 / h);
  }
  return g;
}

std::vector<Point> default_points(const Domain& d) {
  if (d.dimension() == 1) {
    const double R = d.radius();
    return {Point{0.0, 0.0}, Point{0.3 * R, 0.0}, Point{0.5 * R, 0.0}, Point{0.7 * R, 0.0}};
  }
  std::vector<Point> cand{{0.0, 0.0},
                          {0.3, 0.2},
                          {cplx(0.1, 0.2), -0.3},
                          {cplx(-0.4, 0.0), cplx(0.0, 0.3)},
                          {cplx(0.2, -0.3), cplx(0.2, 0.2)},
                          {0.5, cplx(-0.1, 0.1)}};
  std::vector<Point> out;
  const double s = d.kind() == DomainKind::bidisc ? d.radius() : 0.8;
  for (const Point& z : cand)
    if (d.contains(s * z)) out.push_back(s * z);
  return out;
}

std::vector<Point> default_probe(const Domain& d) {
  std::vector<Point> out;
  if (d.dimension() == 1) {
    const double R = d.radius();
    out.push_back({0.0, 0.0});
    for (int a = 1; a <= 3; ++a)
      for (int b = 0; b < 8; ++b)
        out.push_back({std::polar(0.25 * a * R, 2.0 * std::numbers::pi * (b + 0.5 * a) / 8.0), 0.0});
    return out;
  }
  for (double r1 : {0.0, 0.3, 0.6})
    for (double r2 : {0.0, 0.3, 0.6})
      for (int b = 0; b < 4; ++b) {
        const double t = 2.0 * std::numbers::pi * b / 4.0;
        const Point zeta{std::polar(r1, t), std::polar(r2, -0.5 * t + 0.3)};
        if (d.contains(zeta) && boundary_distance(d, zeta) > 0.1) out.push_back(zeta);
      }
  return out;
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

const std::string& anchor_of(const std::string& id) {
  static const std::string none = "unregistered";
  const CheckInfo* c = find_check(id.substr(0, id.find('.')));
  return c ? c->anchor : none;
}

VerificationRecord record(const std::string& id, Json inputs, Json values, double margin, double tol,
                          Json diagnostics = Json::object()) {
  return make_record(id, anchor_of(id), std::move(inputs), std::move(values), margin, tol, std::move(diagnostics));
}

VerificationRecord skip(const std::string& id, Json inputs, const std::string& reason, Json values = Json::object()) {
  return make_skip(id, anchor_of(id), std::move(inputs), reason, std::move(values));
}

Json diagnostics(const ExtremalSolution& s) {
  return Json{{"degree", s.space->degree()},
              {"basis_size", s.space->size()},
              {"smoothing_eps", s.smoothing_eps},
              {"iterations", s.iterations},
              {"kkt_residual", s.kkt_residual},
              {"gram_condition", s.space->condition()},
              {"raw_gram_condition", s.space->raw_condition()}};
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

struct Case {
  std::vector<VerificationRecord> records;
  std::vector<std::vector<Table::Cell>> rows;
  bool hard = false;
};

template <class F>
Case guarded(const std::string& id, const Json& inputs, F&& f) {
  auto failure = [&](const std::string& what) {
    Case c;
    VerificationRecord r = record(id, inputs, Json::object(), -inf, 0.0);
    r.reason = "solver failure: " + what;
    c.records.push_back(std::move(r));
    c.hard = true;
    return c;
  };
  try {
    return f();
  } catch (const SolverFailure& e) {
    return failure(e.what());
  } catch (const IllConditioned& e) {
    return failure(e.what());
  } catch (const InvalidInput& e) {
    Case c;
    c.records.push_back(skip(id, inputs, std::string("precondition not met: ") + e.what()));
    return c;
  }
}

class Context {
 public:
  explicit Context(const RunConfig& c) : config(c), domain(make_domain(parse_descriptor(c.domain))) {
    options.tol = c.tolerance("solver", options.tol);
  }

  const RunConfig& config;
  Domain domain;
  SolverOptions options;
  bool hard = false;

  int n() const { return domain.dimension(); }
  int workers() const { return config.workers; }

  SpacePtr space(int degree) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = spaces_.find(degree);
    if (it == spaces_.end()) it = spaces_.emplace(degree, make_space(domain, degree, config.quad_order)).first;
    return it->second;
  }
  SpacePtr space() { return space(config.degree()); }

  std::vector<Point> points() const {
    std::vector<Point> p = config.all_points();
    return p.empty() ? default_points(domain) : p;
  }
  std::vector<Point> probe() const { return config.probe.empty() ? default_probe(domain) : config.probe; }
  bool within_margin(const Point& z) const { return boundary_distance(domain, z) < config.boundary_margin; }

  Json point(const Point& z) const { return to_json(z, n()); }
  Json inputs(const Json& extra = Json::object()) const {
    Json j{{"domain", domain.name()}, {"degree", config.degree()}, {"quad_order", config.quad_order}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
  }
  std::vector<std::string> z_columns() const {
    return n() == 1 ? std::vector<std::string>{"z"} : std::vector<std::string>{"z1", "z2"};
  }
  void z_cells(std::vector<Table::Cell>& row, const Point& z) const {
    for (int j = 0; j < n(); ++j) row.push_back(z[j]);
  }
  Table table(const std::string& name, const std::vector<std::string>& head, const std::vector<std::string>& tail,
              bool with_z = true) const {
    Table t;
    t.name = name;
    t.columns = head;
    if (with_z)
      for (const auto& c : z_columns()) t.columns.push_back(c);
    t.columns.insert(t.columns.end(), tail.begin(), tail.end());
    return t;
  }

  /// Collects cases into the bundle; skipped rows stay out of the table.
  void absorb(ReportBundle& b, Table* t, std::vector<Case>&& cases) {
    for (auto& c : cases) {
      hard = hard || c.hard;
      for (auto& r : c.records) b.records.push_back(std::move(r));
      if (t)
        for (auto& row : c.rows) t->add(std::move(row));
    }
  }

  /// Points outside the boundary margin, with skip records for the rest.
  std::vector<Point> usable_points(ReportBundle& b, const std::string& id) const {
    std::vector<Point> out;
    for (const Point& z : points()) {
      if (within_margin(z))
        b.records.push_back(skip(id, inputs({{"z", point(z)}}), "point inside the boundary margin"));
      else
        out.push_back(z);
    }
    return out;
  }

 private:
  std::mutex mutex_;
  std::map<int, SpacePtr> spaces_;
};

std::vector<Table::Cell> row_start(std::initializer_list<Table::Cell> cells) { return std::vector<Table::Cell>(cells); }

// ---------------------------------------------------------------------------

ReportBundle check_kernel_oracle(Context& ctx) {
  ReportBundle b;
  const std::string id = "kernel_oracle";
  const double tol = ctx.config.tolerance(id, 1e-4);
  const std::vector<int> degrees = ctx.config.degrees.empty() ? std::vector<int>{ctx.config.degree()} : ctx.config.degrees;
  for (int d : degrees) ctx.space(d);
  Table t = ctx.table("kernel", {"p"}, {"degree", "K", "oracle", "rel_err"});
  std::vector<std::pair<double, Point>> jobs;
  for (const Point& z : ctx.usable_points(b, id))
    for (double p : ctx.config.p_values) jobs.emplace_back(p, z);
  auto cases = parallel_map(jobs.size(), ctx.workers(), [&](std::size_t i) {
    const auto [p, z] = jobs[i];
    const Json in = ctx.inputs({{"p", p}, {"z", ctx.point(z)}, {"degrees", degrees}});
    return guarded(id, in, [&] {
      Case c;
      const std::optional<double> oracle = closed_form_kernel(ctx.domain, z);
      std::vector<double> K;
      Json diag;
      for (int d : degrees) {
        const ExtremalSolution s = solve_min(ctx.space(d), p, z, ctx.options);
        K.push_back(s.K_p_z);
        diag = diagnostics(s);
        auto row = row_start({p});
        ctx.z_cells(row, z);
        row.insert(row.end(), {(long long)d, s.K_p_z, oracle ? *oracle : std::nan(""),
                               oracle ? std::abs(s.K_p_z - *oracle) / *oracle : std::nan("")});
        c.rows.push_back(std::move(row));
      }
      const double plateau = K.size() > 1 ? std::abs(K.back() - K[K.size() - 2]) / K.back() : 0.0;
      Json values{{"K", K.back()}, {"K_by_degree", K}, {"plateau", plateau}};
      if (!oracle) {
        c.records.push_back(skip(id, in, "no closed form on this domain", values));
        return c;
      }
      const double rel = std::abs(K.back() - *oracle) / *oracle;
      values["oracle"] = *oracle;
      values["rel_err"] = rel;
      c.records.push_back(record(id, in, values, -std::max(rel, plateau), tol, diag));
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle check_reproducing(Context& ctx) {
  ReportBundle b;
  const std::string id = "reproducing";
  const double tol = ctx.config.tolerance(id, 1e-6);
  SpacePtr space = ctx.space();
  const std::vector<Point> probe = ctx.probe();
  Table t = ctx.table("offdiag", {"p"}, {"zeta1", "zeta2", "K_zeta_z"});
  std::vector<std::pair<double, Point>> jobs;
  for (const Point& z : ctx.usable_points(b, id))
    for (double p : ctx.config.p_values) {
      if (p > 1.0)
        jobs.emplace_back(p, z);
      else
        b.records.push_back(skip(id, ctx.inputs({{"p", p}, {"z", ctx.point(z)}}), "the residual check uses p > 1"));
    }
  auto cases = parallel_map(jobs.size(), ctx.workers(), [&](std::size_t i) {
    const auto [p, z] = jobs[i];
    const Json in = ctx.inputs({{"p", p}, {"z", ctx.point(z)}, {"seed", ctx.config.seed}, {"tests", 5}});
    return guarded(id, in, [&] {
      Case c;
      const ExtremalSolution s = solve_min(space, p, z, ctx.options);
      std::mt19937_64 rng(ctx.config.seed * 1000003ull + i);
      std::normal_distribution<double> g;
      std::vector<double> res;
      const double unit = 1.0 / std::sqrt(2.0 * double(space->size()));
      for (int k = 0; k < 5; ++k) {
        Eigen::VectorXcd u(space->size());
        for (auto& x : u) x = unit * cplx(g(rng), g(rng));
        res.push_back(reproducing_residual(s, u));
      }
      c.records.push_back(record(id, in, {{"K", s.K_p_z}, {"residuals", res}}, -max_of(res), tol, diagnostics(s)));
      for (const Point& zeta : probe) {
        auto row = row_start({p});
        ctx.z_cells(row, z);
        row.insert(row.end(), {zeta[0], zeta[1], off_diag(s, zeta)});
        c.rows.push_back(std::move(row));
      }
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

Json gradient_values(const GradientCheck& g, const ExtremalSolution& center, double cf_dev) {
  Json v{{"K", center.K_p_z},        {"h", g.h},
         {"analytic", g.analytic},    {"fd", g.fd},
         {"fd_half", g.fd_half},      {"deviation", g.deviation},
         {"deviation_half", g.deviation_half}, {"self_consistency", g.self_consistency}};
  if (cf_dev >= 0.0) v["closed_form_deviation"] = cf_dev;
  return v;
}

double closed_form_deviation(const Domain& d, const GradientCheck& g) {
  const auto cf = closed_form_gradient(d, g.z);
  if (!cf) return -1.0;
  double dev = 0.0;
  for (std::size_t j = 0; j < cf->size(); ++j) dev = std::max(dev, std::abs((*cf)[j] - g.analytic[j]) / g.scale);
  return dev;
}

ReportBundle check_gradient(Context& ctx) {
  ReportBundle b;
  const std::string id = "gradient_identity";
  const double tol = ctx.config.tolerance(id, 1e-3);
  SpacePtr space = ctx.space();
  std::vector<std::string> grad_cols;
  for (int j = 0; j < ctx.n(); ++j) grad_cols.push_back("dK_dx" + std::to_string(j + 1));
  for (int j = 0; j < ctx.n(); ++j) grad_cols.push_back("dK_dy" + std::to_string(j + 1));
  std::vector<std::string> tail{"K"};
  tail.insert(tail.end(), grad_cols.begin(), grad_cols.end());
  tail.insert(tail.end(), {"deviation", "self_consistency"});
  Table t = ctx.table("gradient", {"p"}, tail);
  std::vector<std::pair<double, Point>> jobs;
  for (const Point& z : ctx.usable_points(b, id))
    for (double p : ctx.config.p_values) jobs.emplace_back(p, z);
  auto cases = parallel_map(jobs.size(), ctx.workers(), [&](std::size_t i) {
    const auto [p, z] = jobs[i];
    const Json in = ctx.inputs({{"p", p}, {"z", ctx.point(z)}});
    return guarded(id, in, [&] {
      Case c;
      const ExtremalSolution center = solve_min(space, p, z, ctx.options);
      const GradientCheck g = gradient_identity(space, p, z, ctx.options, &center);
      const double cf = closed_form_deviation(ctx.domain, g);
      const double worst = std::max({g.deviation, g.deviation_half, cf});
      c.records.push_back(record(id, in, gradient_values(g, center, cf), -worst, tol, diagnostics(center)));
      auto row = row_start({p});
      ctx.z_cells(row, z);
      row.push_back(center.K_p_z);
      for (double x : g.analytic) row.push_back(x);
      row.insert(row.end(), {g.deviation, g.self_consistency});
      c.rows.push_back(std::move(row));
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle check_holder(Context& ctx) {
  ReportBundle b;
  const std::string id = "holder";
  const double slack = ctx.config.tolerance(id, 0.1);
  SpacePtr space = ctx.space();
  const std::vector<Point> pts = ctx.usable_points(b, id);
  if (pts.empty()) return b;
  const Point z0 = pts.front();
  const Point v = (1.0 / norm(ctx.config.direction)) * ctx.config.direction;
  const Point zeta = ctx.probe().front();
  const double delta = boundary_distance(ctx.domain, z0);
  const double t_max = std::min(0.1, 0.25 * delta), t_min = t_max / 100.0;
  constexpr int count = 21;
  Table t = ctx.table("holder", {"p", "distance", "gradient_difference", "kernel_difference"}, {}, false);
  std::vector<double> ps;
  for (double p : ctx.config.p_values) {
    if (p > 1.0)
      ps.push_back(p);
    else
      b.records.push_back(skip(id, ctx.inputs({{"p", p}}), "Holder fits use p > 1"));
  }
  auto cases = parallel_map(ps.size(), ctx.workers(), [&](std::size_t i) {
    const double p = ps[i];
    const Json in = ctx.inputs({{"p", p},
                                {"z0", ctx.point(z0)},
                                {"direction", ctx.point(v)},
                                {"zeta", ctx.point(zeta)},
                                {"t_min", t_min},
                                {"t_max", t_max},
                                {"count", count}});
    return guarded(id, in, [&] {
      Case c;
      const ExtremalSolution center = solve_min(space, p, z0, ctx.options);
      const HolderSamples S = holder_samples(space, p, z0, v, zeta, t_min, t_max, count, ctx.options);
      const double floor = 1e-8 * center.K_p_z;
      const double target = holder_target(p);
      for (const auto& [name, diff] :
           {std::pair{"gradient", &S.gradient_difference}, std::pair{"kernel", &S.kernel_difference}}) {
        const std::string sub = id + "." + name;
        Json values{{"target", target}};
        try {
          const HolderFit f = holder_fit(S.distance, *diff, floor);
          values["alpha_hat"] = f.alpha_hat;
          values["stderr"] = f.stderr_alpha;
          values["pairs_used"] = f.used;
          values["pairs_total"] = f.total;
          values["decades"] = f.decades;
          double margin = f.alpha_hat - target;
          Json diag = diagnostics(center);
          if (f.used < 20 || f.decades < 2.0 - 1e-9) {
            margin = std::min(margin, -slack - 1.0);
            diag["note"] = "fewer than 20 pairs or less than two decades above the noise floor";
          }
          c.records.push_back(record(sub, in, values, margin, slack, diag));
        } catch (const InvalidInput& e) {
          c.records.push_back(record(sub, in, values, -inf, slack, {{"note", e.what()}}));
        }
      }
      for (std::size_t k = 0; k < S.distance.size(); ++k)
        c.rows.push_back({p, S.distance[k], S.gradient_difference[k], S.kernel_difference[k]});
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

Point levi_direction(int n, int i) {
  if (n == 1) return {std::polar(1.0, std::numbers::pi * i / 4.0), 0.0};
  const double a = 0.5 * std::numbers::pi * (i + 0.5) / 8.0;
  return {std::cos(a), std::polar(std::sin(a), 0.75 * std::numbers::pi * i)};
}

ReportBundle check_levi(Context& ctx) {
  ReportBundle b;
  const std::string id = "levi";
  const double tol = ctx.config.tolerance(id, 1e-3);
  SpacePtr space = ctx.space();
  const std::vector<Point> pts = ctx.usable_points(b, id);
  if (pts.empty()) return b;
  const std::size_t samples = std::max<std::size_t>(8, pts.size());
  Table t = ctx.table("levi", {"p"}, {"X1", "X2", "lhs", "rhs", "B_hat", "XK_over_K", "margin", "scale"});
  std::vector<std::pair<double, std::size_t>> jobs;
  for (double p : ctx.config.p_values) {
    if (p > 1.0 && p <= 2.0)
      for (std::size_t i = 0; i < samples; ++i) jobs.emplace_back(p, i);
    else
      b.records.push_back(skip(id, ctx.inputs({{"p", p}}), "the Levi bound is stated for 1 < p <= 2"));
  }
  auto cases = parallel_map(jobs.size(), ctx.workers(), [&](std::size_t k) {
    const auto [p, i] = jobs[k];
    const Point z = pts[i % pts.size()];
    const Point X = levi_direction(ctx.n(), int(i));
    const double r = 0.1 * boundary_distance(ctx.domain, z);
    const Json in = ctx.inputs({{"p", p}, {"z", ctx.point(z)}, {"X", ctx.point(X)}, {"r", r}});
    const std::string sub = p == 2.0 ? id + ".equality" : id + ".bound";
    return guarded(sub, in, [&] {
      Case c;
      const LeviSample s = levi_check(space, p, z, X, r, ctx.options);
      Json values{{"lhs", s.lhs},         {"rhs", s.rhs},     {"B_hat", s.B_hat}, {"XK_over_K", s.XK_over_K},
                  {"T", s.T},             {"radii", s.radii}, {"margin", s.margin}, {"scale", s.scale}};
      if (!s.converged) {
        c.records.push_back(skip(sub, in, "second differences not converging under radius halving", values));
        return c;
      }
      const double m = p == 2.0 ? -std::abs(s.margin) / s.scale : s.margin / s.scale;
      c.records.push_back(record(sub, in, values, m, tol));
      auto row = row_start({p});
      ctx.z_cells(row, z);
      row.insert(row.end(), {X[0], X[1], s.lhs, s.rhs, s.B_hat, s.XK_over_K, s.margin, s.scale});
      c.rows.push_back(std::move(row));
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle check_inequalities(Context& ctx) {
  ReportBundle b;
  const std::string id = "inequalities";
  const double tol = ctx.config.tolerance(id, 1e-12);
  const std::size_t n = ctx.config.samples;
  const std::uint64_t seed = ctx.config.seed;
  Table t;
  t.name = "inequalities";
  t.columns = {"inequality", "q", "samples", "violations", "degenerate", "worst_margin"};
  std::vector<std::pair<InequalityId, double>> jobs;
  for (InequalityId ineq : all_inequalities)
    for (double q : default_q_grid())
      if (in_range(ineq, q)) jobs.emplace_back(ineq, q);
  auto sweeps = parallel_map(jobs.size(), ctx.workers(), [&](std::size_t i) {
    return sweep_inequality(jobs[i].first, jobs[i].second, n, seed + 7919 * i, B1_exact, tol);
  });
  for (const SweepResult& s : sweeps) {
    const Json in{{"inequality", to_string(s.id)}, {"q", s.q}, {"samples", n}, {"seed", seed}};
    Json values{{"violations", s.violations},
                {"degenerate", s.degenerate},
                {"worst_margin", s.worst_margin},
                {"worst_a", to_json(s.worst_a)},
                {"worst_b", to_json(s.worst_b)}};
    b.records.push_back(record(id + "." + to_string(s.id), in, values, s.violations ? std::min(s.worst_margin, -2.0 * tol) : s.worst_margin, tol));
    t.add({to_string(s.id), s.q, (long long)s.samples, (long long)s.violations, (long long)s.degenerate,
           s.worst_margin});
  }

  const B1Estimate est = estimate_B1(std::min<std::size_t>(n, 100000), seed);
  const double rel = (est.value - B1_exact) / B1_exact;
  b.records.push_back(record(id + ".B1", {{"budget", est.samples}, {"seed", seed}},
                             {{"estimate", est.value}, {"exact", B1_exact}, {"a", to_json(est.a)}, {"b", to_json(est.b)}},
                             -std::abs(rel), ctx.config.tolerance("inequalities.B1", 1e-6)));

  std::vector<double> qs;
  for (double q : default_q_grid())
    if (q > 2.0) qs.push_back(q);
  auto expansions = parallel_map(qs.size(), ctx.workers(),
                                 [&](std::size_t i) { return sweep_expansion(qs[i], n, seed + 104729 * (i + 1)); });
  for (const ExpansionSweep& e : expansions) {
    const Json in{{"q", e.q}, {"samples", n}, {"seed", seed}};
    b.records.push_back(record(id + ".expansion_identity", in, {{"max_identity_error", e.max_identity_error}},
                               -e.max_identity_error, ctx.config.tolerance("inequalities.expansion", 1e-10)));
    b.records.push_back(record(id + ".expansion_envelope", in,
                               {{"envelope_violations", e.envelope_violations}, {"max_ratio", e.max_ratio}},
                               -double(e.envelope_violations), 0.0));
  }
  b.tables.push_back(std::move(t));
  return b;
}

std::vector<Point> refine_path(const std::vector<Point>& pts) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.push_back(pts[i]);
    if (i + 1 < pts.size()) out.push_back(0.5 * (pts[i] + pts[i + 1]));
  }
  return out;
}

ReportBundle check_hat_h(Context& ctx) {
  ReportBundle b;
  const std::string id = "hat_h_lemma";
  SpacePtr space = ctx.space();
  const std::vector<Point> pts = ctx.usable_points(b, id);
  if (pts.size() < 2) {
    b.records.push_back(skip(id, ctx.inputs(), "needs at least two points"));
    return b;
  }
  const std::vector<Point> fine = refine_path(pts);
  Table t = ctx.table("hat_h", {"p", "i", "j", "kernel_form", "integral_form", "relative_gap", "lemma_margin"}, {},
                      false);
  const std::vector<double>& ps = ctx.config.p_values;
  Json pj = Json::array();
  for (const Point& z : pts) pj.push_back(ctx.point(z));
  auto cases = parallel_map(ps.size(), ctx.workers(), [&](std::size_t k) {
    const double p = ps[k];
    const Json in = ctx.inputs({{"p", p}, {"points", pj}});
    return guarded(id, in, [&] {
      Case c;
      std::vector<ExtremalSolution> sol;
      for (const Point& z : fine) sol.push_back(solve_min(space, p, z, ctx.options, sol.empty() ? nullptr : &sol.back()));
      std::vector<ExtremalSolution> coarse;
      for (std::size_t i = 0; i < sol.size(); i += 2) coarse.push_back(sol[i]);
      double gap = 0.0, lemma = inf, sym = 0.0, min_h = inf;
      Json lemma_detail = Json::array();
      for (std::size_t i = 0; i < coarse.size(); ++i)
        for (std::size_t j = i + 1; j < coarse.size(); ++j) {
          const HatH h = hat_H(coarse[i], coarse[j]);
          const HatH hs = hat_H(coarse[j], coarse[i]);
          gap = std::max(gap, h.relative_gap());
          sym = std::max(sym, std::abs(h.kernel_form - hs.kernel_form) / h.scale);
          min_h = std::min(min_h, h.integral_form / h.scale);
          double pair_margin = inf;
          for (const LemmaMargin& m : lemma31_check(coarse[i], coarse[j])) {
            pair_margin = std::min(pair_margin, m.margin / m.scale);
            lemma_detail.push_back({{"i", i}, {"j", j}, {"name", m.name}, {"lhs", m.lhs}, {"rhs", m.rhs},
                                    {"margin", m.margin}, {"scale", m.scale}});
          }
          lemma = std::min(lemma, pair_margin);
          c.rows.push_back({p, (long long)i, (long long)j, h.kernel_form, h.integral_form, h.relative_gap(),
                            pair_margin});
        }
      const Json diag = diagnostics(coarse.front());
      c.records.push_back(record(id + ".forms", in, {{"max_relative_gap", gap}}, -gap,
                                 ctx.config.tolerance("hat_h_lemma.forms", 1e-6), diag));
      c.records.push_back(record(id + ".symmetry", in, {{"max_asymmetry", sym}, {"min_normalized_H", min_h}},
                                 -std::max(sym, -min_h), 1e-10, diag));
      c.records.push_back(record(id + ".lemma", in, {{"min_margin", lemma}, {"pairs", lemma_detail}}, lemma,
                                 ctx.config.tolerance(id, 1e-8), diag));
      const double rc = prop32_ratio(coarse), rf = prop32_ratio(sol);
      const double stab = std::max(rc, rf) / std::min(rc, rf);
      c.records.push_back(record(id + ".ratio", in,
                                 {{"ratio_coarse", rc}, {"ratio_refined", rf}, {"stability", stab},
                                  {"refined_points", fine.size()}},
                                 std::isfinite(stab) ? 2.0 - stab : -inf, 0.0, diag));
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle check_weighted(Context& ctx) {
  ReportBundle b;
  const std::string id = "weighted_identity";
  SpacePtr space = ctx.space();
  const std::vector<Point> probe = ctx.probe();
  Table t = ctx.table("weighted", {"p"}, {"max_deviation", "diagonal_deviation", "energy_error", "self_consistency",
                                          "weight_floor"});
  std::vector<std::pair<double, Point>> jobs;
  for (const Point& z : ctx.usable_points(b, id))
    for (double p : ctx.config.p_values) jobs.emplace_back(p, z);
  auto cases = parallel_map(jobs.size(), ctx.workers(), [&](std::size_t i) {
    const auto [p, z] = jobs[i];
    const Json in = ctx.inputs({{"p", p}, {"z", ctx.point(z)}, {"probe_points", probe.size()}});
    return guarded(id, in, [&] {
      Case c;
      const ExtremalSolution s = solve_min(space, p, z, ctx.options);
      const Thm61Report r = thm61_check(s, probe);
      const Json values{{"max_deviation", r.max_deviation},   {"diagonal_deviation", r.diagonal_deviation},
                        {"energy_error", r.energy_error},     {"self_consistency", r.self_consistency},
                        {"weight_floor", r.weight_floor},     {"weighted_gram_condition", r.weighted.gram_condition}};
      if (!r.in_theorem_range) {
        c.records.push_back(skip(id, in, "p > 2 lies outside the identity's range; values recorded as data", values));
      } else {
        Json diag = diagnostics(s);
        diag["self_consistency"] = r.self_consistency;
        c.records.push_back(record(id, in, values, -std::max(r.max_deviation, r.diagonal_deviation),
                                   ctx.config.tolerance(id, 1e-3), diag));
        c.records.push_back(record(id + ".energy", in, values, -r.energy_error,
                                   ctx.config.tolerance("weighted_identity.energy", 1e-4), diag));
      }
      auto row = row_start({p});
      ctx.z_cells(row, z);
      row.insert(row.end(), {r.max_deviation, r.diagonal_deviation, r.energy_error, r.self_consistency, r.weight_floor});
      c.rows.push_back(std::move(row));
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

std::vector<double> exponent_grid(double target) {
  std::set<double> s{1.0, 3.0, 4.0, target};
  for (double off : {0.05, 0.1, 0.25, 0.5})
    for (double sign : {-1.0, 1.0}) {
      const double t = target + sign * off;
      if (t >= 1.0 && t <= 4.0) s.insert(t);
    }
  return {s.begin(), s.end()};
}

std::vector<double> midpoint_refine(const std::vector<double>& g) {
  std::vector<double> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.push_back(g[i]);
    if (i + 1 < g.size()) out.push_back(0.5 * (g[i] + g[i + 1]));
  }
  return out;
}

ReportBundle check_p_sweep(Context& ctx) {
  ReportBundle b;
  const std::string id = "p_sweep";
  SpacePtr space = ctx.space();
  const auto& pv = ctx.config.p_values;
  const double target = pv.size() == 1 && pv[0] > 1.0 && pv[0] < 4.0 ? pv[0] : 2.0;
  const std::vector<double> coarse = exponent_grid(target), fine = midpoint_refine(coarse);
  Table t = ctx.table("p_sweep", {"grid"}, {"t", "K", "normalized"});
  const std::vector<Point> pts = ctx.usable_points(b, id);
  auto cases = parallel_map(pts.size(), ctx.workers(), [&](std::size_t i) {
    const Point z = pts[i];
    const Json in = ctx.inputs({{"z", ctx.point(z)}, {"target_p", target}, {"t_grid", coarse}});
    return guarded(id, in, [&] {
      Case c;
      const PSweep a = p_sweep(space, z, coarse, target, ctx.options);
      const PSweep f = p_sweep(space, z, fine, target, ctx.options);
      for (const auto& [name, s] : {std::pair{"coarse", &a}, std::pair{"refined", &f}})
        for (const SweepRow& r : s->rows) {
          auto row = row_start({std::string(name)});
          ctx.z_cells(row, z);
          row.insert(row.end(), {r.t, r.K, r.normalized});
          c.rows.push_back(std::move(row));
        }
      const double mono = std::min(a.monotonicity_margin, f.monotonicity_margin);
      c.records.push_back(record(id + ".monotone", in,
                                 {{"margin_coarse", a.monotonicity_margin}, {"margin_refined", f.monotonicity_margin}},
                                 mono, ctx.config.tolerance("p_sweep.monotone", 1e-6)));
      const double floor = std::max(a.noise_ratio, f.noise_ratio);
      const double ra = std::max(a.modulus_ratio, floor), rf = std::max(f.modulus_ratio, floor);
      const double stab = std::max(ra, rf) / std::min(ra, rf);
      c.records.push_back(record(id + ".modulus", in,
                                 {{"ratio_coarse", a.modulus_ratio},
                                  {"ratio_refined", f.modulus_ratio},
                                  {"noise_ratio", floor},
                                  {"truncation", std::max(a.truncation, f.truncation)},
                                  {"stability", stab}},
                                 std::isfinite(stab) ? 2.0 - stab : -inf, 0.0));
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle check_zero_free(Context& ctx) {
  ReportBundle b;
  const std::string id = "zero_free";
  const double tol = ctx.config.tolerance(id, ctx.n() == 1 ? 1e-3 : 1e-2);
  SpacePtr space = ctx.space();
  const std::vector<Point> probe = ctx.probe();
  Table t = ctx.table("zero_free", {"kind", "p", "s"}, {"gate_min_modulus", "kernel_deviation", "minimizer_deviation"});
  const std::vector<Point> pts = ctx.usable_points(b, id);
  auto cases = parallel_map(pts.size(), ctx.workers(), [&](std::size_t i) {
    const Point z = pts[i];
    Case all;
    {
      const Json in = ctx.inputs({{"z", ctx.point(z)}, {"k", 2}, {"probe_points", probe.size()}});
      Case c = guarded(id + ".power", in, [&] {
        Case c;
        const MpkReport r = mpk_probe(space, 2, z, probe, ctx.options);
        Json entries = Json::array();
        for (const MpkEntry& e : r.entries)
          entries.push_back({{"k", e.k}, {"converged", e.converged}, {"sup_deviation", e.sup_deviation},
                             {"diagnostic", e.diagnostic}});
        const Json values{{"entries", entries}, {"largest_converged_k", r.largest_converged_k}};
        if (!r.gate_passed) {
          c.records.push_back(skip(id + ".power", in, "m_2 not certified zero-free: " + r.gate_diagnostic, values));
          return c;
        }
        const MpkEntry& last = r.entries.back();
        c.records.push_back(record(id + ".power", in, values, last.converged ? -last.sup_deviation : -inf, tol));
        auto row = row_start({std::string("power"), 2.0, 4.0});
        ctx.z_cells(row, z);
        row.insert(row.end(), {std::nan(""), std::nan(""), last.sup_deviation});
        c.rows.push_back(std::move(row));
        return c;
      });
      all.records.insert(all.records.end(), c.records.begin(), c.records.end());
      all.rows.insert(all.rows.end(), c.rows.begin(), c.rows.end());
      all.hard = all.hard || c.hard;
    }
    for (double p : ctx.config.p_values) {
      const double s = 2.0 * p;
      const Json in = ctx.inputs({{"z", ctx.point(z)}, {"p", p}, {"s", s}, {"probe_points", probe.size()}});
      Case c = guarded(id + ".identity", in, [&] {
        Case c;
        const ExtremalSolution sp = solve_min(space, p, z, ctx.options);
        const ZeroFreeReport r = zero_free_identity(sp, s, probe, ctx.options);
        const Json values{{"gate_min_modulus", r.gate.min_modulus},
                          {"kernel_deviation", r.kernel_deviation},
                          {"minimizer_deviation", r.minimizer_deviation},
                          {"modulus_identity", r.modulus_identity},
                          {"branch_continuous", r.branch_continuous}};
        if (r.skipped) {
          c.records.push_back(skip(id + ".identity", in, r.skip_reason, values));
          return c;
        }
        c.records.push_back(record(id + ".identity", in, values,
                                   -std::max({r.kernel_deviation, r.minimizer_deviation, r.modulus_identity}), tol,
                                   diagnostics(sp)));
        auto row = row_start({std::string("identity"), p, s});
        ctx.z_cells(row, z);
        row.insert(row.end(), {r.gate.min_modulus, r.kernel_deviation, r.minimizer_deviation});
        c.rows.push_back(std::move(row));
        return c;
      });
      all.records.insert(all.records.end(), c.records.begin(), c.records.end());
      all.rows.insert(all.rows.end(), c.rows.begin(), c.rows.end());
      all.hard = all.hard || c.hard;
    }
    return all;
  });
  ctx.absorb(b, &t, std::move(cases));

  // a function with a zero at 0.1 must be rejected by the gate
  const Basis& basis = space->basis();
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(space->size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis.indices[k] == MultiIndex{0, 0}) u[k] = -0.25 / space->scale()[k];
    if (basis.indices[k] == MultiIndex{1, 0}) u[k] = 2.5 / space->scale()[k];
  }
  const ZeroFreeGate g = zero_free_gate(space, u);
  b.records.push_back(record(id + ".gate", ctx.inputs({{"function", "(zeta_1 - 0.1) / 0.4"}}),
                             {{"passed", g.passed}, {"min_modulus", g.min_modulus}, {"witness", ctx.point(g.witness)},
                              {"diagnostic", g.diagnostic}},
                             g.passed ? -1.0 : 0.0, 0.0));
  b.tables.push_back(std::move(t));
  return b;
}

bool zero_free_model(const Domain& d) {
  return d.kind() != DomainKind::reinhardt_radial || closed_form_kernel(d, {0.0, 0.0}).has_value();
}

ReportBundle check_series(Context& ctx) {
  ReportBundle b;
  const std::string id = "series_atlas";
  SpacePtr space = ctx.space();
  const int n = ctx.n();
  const int d = ctx.config.degree(), D = n == 1 ? 80 : 40;
  const MomentTable small(ctx.domain, std::max(2, d)), big(ctx.domain, D);

  std::mt19937_64 rng(ctx.config.seed * 2654435761ull + 17);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double box = ctx.domain.kind() == DomainKind::bidisc || n == 1 ? ctx.domain.radius() : 1.0;
  auto draw = [&] {
    for (;;) {
      Point w{cplx(unit(rng), unit(rng)), n == 1 ? cplx(0.0) : cplx(unit(rng), unit(rng))};
      w = box * w;
      if (ctx.domain.contains((1.0 / 0.6) * w)) return w;
    }
  };
  std::vector<Point> zs(10);
  std::vector<std::vector<Point>> zetas(10, std::vector<Point>(10));
  for (int i = 0; i < 10; ++i) {
    zs[i] = draw();
    for (auto& w : zetas[i]) w = draw();
  }
  const Json in = ctx.inputs({{"pairs", 100}, {"series_degree", D}, {"seed", ctx.config.seed}});
  Case agreement = guarded(id + ".agreement", in, [&] {
    Case c;
    double worst = 0.0, worst_diff = 0.0;
    bool tails_valid = true;
    auto ratios = parallel_map(zs.size(), ctx.workers(), [&](std::size_t i) {
      const ExtremalSolution s = solve_l2(space, {}, zs[i]);
      std::vector<std::array<double, 3>> out;
      for (const Point& w : zetas[i]) {
        const MomentTable::Value vb = big.evaluate(w, zs[i]), vs = small.evaluate(w, zs[i]);
        const double diff = std::abs(s.kernel(w) - vb.kernel);
        const double bound = vs.tail_bound + vb.tail_bound + 1e-10 * std::abs(vb.kernel);
        out.push_back({diff / bound, diff, vb.tail_valid && vs.tail_valid ? 1.0 : 0.0});
      }
      return out;
    });
    for (const auto& a : ratios)
      for (const auto& r : a) {
        worst = std::max(worst, r[0]);
        worst_diff = std::max(worst_diff, r[1]);
        tails_valid = tails_valid && r[2] > 0.0;
      }
    Json values{{"max_ratio", worst}, {"max_difference", worst_diff}, {"tails_valid", tails_valid}};
    c.records.push_back(record(id + ".agreement", in, values, tails_valid ? 1.0 - worst : -inf, 0.0));
    return c;
  });
  ctx.absorb(b, nullptr, {agreement});

  double wind_err = 0.0;
  Json wind = Json::array();
  for (int k : {1, 2}) {
    const WindingResult w = zero_order([k](cplx t) { return std::pow(t, k); }, 0.0, 0.5);
    wind_err = std::max(wind_err, std::abs(w.raw - k) + (w.order == k ? 0.0 : 1.0));
    wind.push_back({{"power", k}, {"order", w.order}, {"raw", w.raw}});
  }
  b.records.push_back(record(id + ".winding", {{"functions", "zeta, zeta^2"}, {"radius", 0.5}}, {{"results", wind}},
                             -wind_err, 1e-3));

  Table t = ctx.table("zero_atlas", {}, {"verdict", "min_modulus", "max_tail", "witness1", "witness2", "winding"});
  const std::vector<Point> pts = ctx.usable_points(b, id);
  auto cases = parallel_map(pts.size(), ctx.workers(), [&](std::size_t i) {
    const Point z = pts[i];
    const Json cin = ctx.inputs({{"z", ctx.point(z)}, {"series_degree", D}});
    return guarded(id + ".classification", cin, [&] {
      Case c;
      const ZeroClassification r = classify(big, z);
      Json values{{"verdict", to_string(r.verdict)}, {"min_modulus", r.min_modulus}, {"max_tail", r.max_tail},
                  {"witness", ctx.point(r.witness)},  {"winding", r.winding},         {"diagnostic", r.diagnostic}};
      if (zero_free_model(ctx.domain))
        c.records.push_back(record(id + ".classification", cin, values, r.verdict == ZeroVerdict::zero_free ? 0.0 : -1.0, 0.0));
      else
        c.records.push_back(skip(id + ".classification", cin, "exploratory: no reference verdict for this domain", values));
      std::vector<Table::Cell> row;
      ctx.z_cells(row, z);
      row.insert(row.end(), {to_string(r.verdict), r.min_modulus, r.max_tail, r.witness[0], r.witness[1],
                             (long long)r.winding});
      c.rows.push_back(std::move(row));
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle check_p1(Context& ctx) {
  ReportBundle b;
  const std::string id = "p1_limit";
  SpacePtr space = ctx.space();
  const std::vector<Point> pts = ctx.usable_points(b, id);
  const std::vector<double> seq{1.5, 1.25, 1.1, 1.05, 1.02};
  const std::vector<Point> probe = ctx.probe();
  Table t = ctx.table("p1_limit", {"p"}, {"K", "K_difference", "minimizer_sup_diff"});
  auto cases = parallel_map(pts.size(), ctx.workers(), [&](std::size_t i) {
    const Point z = pts[i];
    const Json in = ctx.inputs({{"z", ctx.point(z)}, {"p_sequence", seq}, {"probe_points", probe.size()}});
    return guarded(id, in, [&] {
      Case c;
      const K1Probe k = k1_limit_probe(space, z, seq, probe, ctx.options);
      const Json values{{"K", k.K}, {"K_differences", k.K_differences}, {"minimizer_sup_diffs", k.minimizer_sup_diffs}};
      c.records.push_back(record(id + ".cauchy", in, values, -k.K_differences.back(), ctx.config.tolerance(id, 1e-3)));
      c.records.push_back(record(id + ".minimizers", in, values, k.monotone_shrinking ? 0.0 : -1.0, 0.0));
      const ExtremalSolution center = solve_min(space, seq.back(), z, ctx.options);
      const GradientCheck g = gradient_identity(space, seq.back(), z, ctx.options, &center);
      const double cf = closed_form_deviation(ctx.domain, g);
      c.records.push_back(record(id + ".gradient", ctx.inputs({{"z", ctx.point(z)}, {"p", seq.back()}}),
                                 gradient_values(g, center, cf), -std::max({g.deviation, g.deviation_half, cf}),
                                 ctx.config.tolerance("gradient_identity", 1e-3), diagnostics(center)));
      for (std::size_t j = 0; j < k.p.size(); ++j) {
        auto row = row_start({k.p[j]});
        ctx.z_cells(row, z);
        row.insert(row.end(), {k.K[j], j ? k.K_differences[j - 1] : std::nan(""),
                               j ? k.minimizer_sup_diffs[j - 1] : std::nan("")});
        c.rows.push_back(std::move(row));
      }
      return c;
    });
  });
  ctx.absorb(b, &t, std::move(cases));
  constexpr std::size_t bc_samples = 10000;
  const BorelCaratheodory bc = borel_caratheodory_suite(bc_samples, ctx.config.seed);
  b.records.push_back(record(id + ".borel_caratheodory", {{"samples", bc_samples}, {"seed", ctx.config.seed}},
                             {{"violations", bc.violations}, {"worst_margin", bc.worst_margin}},
                             -double(bc.violations), 0.0));
  b.tables.push_back(std::move(t));
  return b;
}

ReportBundle check_boundary(Context& ctx) {
  ReportBundle b;
  const std::string id = "boundary_experiment";
  const Point u = (1.0 / norm(ctx.config.direction)) * ctx.config.direction;
  double lo = 0.0, hi = 4.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ctx.domain.contains(mid * u) ? lo : hi) = mid;
  }
  const int degree = ctx.config.degrees.empty() ? 40 : ctx.config.degree();
  const std::vector<int> ks{1, 2, 4};
  const Json in = ctx.inputs({{"direction", ctx.point(u)}, {"s_max", 0.98 * lo}, {"series_degree", degree},
                              {"steps", 24}, {"k_values", ks}});
  Table t;
  t.name = "boundary_scan";
  t.columns = {"s", "verdict"};
  Case c = guarded(id, in, [&] {
    Case c;
    const MomentTable series(ctx.domain, degree);
    const BoundaryExperiment ex = boundary_experiment(series, u, 0.98 * lo, 24, ks);
    Json verdicts = Json::array();
    for (std::size_t i = 0; i < ex.s_grid.size(); ++i) {
      verdicts.push_back(to_string(ex.verdicts[i]));
      c.rows.push_back({ex.s_grid[i], to_string(ex.verdicts[i])});
    }
    Json values{{"profile", ex.profile},
                {"verdicts", verdicts},
                {"closedness_anomalies", ex.closedness_anomalies},
                {"transition_found", ex.transition_found},
                {"diagnostic", ex.diagnostic}};
    if (ex.transition_found) {
      values["z0"] = ctx.point(ex.z0);
      values["zeta0"] = ctx.point(ex.zeta0);
      values["normal"] = ctx.point(ex.normal);
      values["k0"] = ex.k0 ? Json(*ex.k0) : Json("unknown");
      values["k_values"] = ex.k_values;
      values["growth_exponent"] = ex.growth_exponent;
    }
    c.records.push_back(skip(id, in, "exploratory: boundary behaviour is not certifiable at finite degree", values));
    return c;
  });
  ctx.absorb(b, &t, {c});
  b.tables.push_back(std::move(t));
  return b;
}

using CheckFn = ReportBundle (*)(Context&);

CheckFn dispatch(const std::string& name) {
  static const std::map<std::string, CheckFn> table{
      {"kernel_oracle", check_kernel_oracle}, {"reproducing", check_reproducing},
      {"gradient_identity", check_gradient},  {"holder", check_holder},
      {"levi", check_levi},                   {"inequalities", check_inequalities},
      {"hat_h_lemma", check_hat_h},           {"weighted_identity", check_weighted},
      {"p_sweep", check_p_sweep},             {"zero_free", check_zero_free},
      {"series_atlas", check_series},         {"p1_limit", check_p1},
      {"boundary_experiment", check_boundary}};
  return table.at(name);
}

int exit_code(const ReportBundle& b, bool hard) { return hard ? 3 : b.any_fail() ? 1 : 0; }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool any_p(const RunConfig& c, double lo, double hi, bool closed_hi) {
  for (double p : c.p_values)
    if (p > lo && (closed_hi ? p <= hi : p < hi)) return true;
  return false;
}

}  // namespace

void validate(const RunConfig& c) {
  validate_fields(c);
  const Domain d = make_domain(parse_descriptor(c.domain));
  std::set<std::string> seen;
  for (const auto& name : c.checks) {
    require(find_check(name) != nullptr, "unknown check '" + name + "'");
    require(seen.insert(name).second, "check '" + name + "' listed twice");
  }
  if (d.dimension() == 1) require(c.direction[1] == 0.0, "direction must have one coordinate on a planar domain");
  auto has = [&](const char* name) { return seen.count(name) > 0; };
  if (has("reproducing")) require(any_p(c, 1.0, inf, false), "reproducing needs some p > 1");
  if (has("holder")) require(any_p(c, 1.0, inf, false), "holder needs some p > 1");
  if (has("levi")) require(any_p(c, 1.0, 2.0, true), "levi needs some p in (1, 2]");
  if (has("inequalities")) require(c.samples >= 1, "inequalities need samples >= 1");
  if (has("series_atlas")) require(c.degree() >= 2, "series_atlas needs degree >= 2");
  if (has("boundary_experiment"))
    require(d.dimension() == 2, "boundary_experiment needs a domain in C^2");

  std::vector<Point> pts = c.all_points();
  if (pts.empty()) pts = default_points(d);
  std::size_t usable = 0;
  bool needs_space = false;
  for (const auto& name : c.checks) needs_space = needs_space || (name != "inequalities" && name != "boundary_experiment");
  if (!needs_space) return;
  std::vector<int> degrees = c.degrees.empty() ? std::vector<int>{c.degree()} : c.degrees;
  for (int deg : degrees) {
    const SpacePtr s = make_space(d, deg, c.quad_order);
    for (const Point& z : pts) {
      if (boundary_distance(d, z) < c.boundary_margin) continue;
      ++usable;
      try {
        s->require_interior(z);
      } catch (const InvalidInput& e) {
        throw ConfigError(std::string(e.what()) + " (degree " + std::to_string(deg) + ")");
      }
    }
  }
  if (has("hat_h_lemma")) require(usable >= 2 * degrees.size(), "hat_h_lemma needs two points outside the margin");
  if (has("holder") && usable > 0) {
    const Point z0 = [&] {
      for (const Point& z : pts)
        if (boundary_distance(d, z) >= c.boundary_margin) return z;
      return pts.front();
    }();
    require(boundary_distance(d, z0) > 0.0, "holder base point must be interior");
  }
}

RunOutcome run(const RunConfig& c) {
  validate(c);
  Context ctx(c);
  RunOutcome out;
  out.bundle.title = "pberg run on " + ctx.domain.name();
  out.bundle.config = c.to_json();
  for (const auto& name : c.checks) {
    try {
      out.bundle.append(dispatch(name)(ctx));
    } catch (const SolverFailure& e) {
      out.bundle.records.push_back(record(name, ctx.inputs(), {{"error", e.what()}}, -inf, 0.0));
      ctx.hard = true;
    } catch (const IllConditioned& e) {
      out.bundle.records.push_back(record(name, ctx.inputs(), {{"error", e.what()}}, -inf, 0.0));
      ctx.hard = true;
    }
  }
  out.exit_code = exit_code(out.bundle, ctx.hard);
  if (!c.out.empty()) write_bundle(out.bundle, c.out);
  return out;
}

RunOutcome sweep(const RunConfig& c) {
  validate_fields(c);
  require(!c.all_points().empty(), "sweep needs a grid or explicit points");
  Context ctx(c);
  SpacePtr space = ctx.space();
  const double margin = std::max(c.boundary_margin, 10.0 * space->boundary_mesh());
  const int n = ctx.n();
  std::vector<std::string> tail{"status", "reason", "K", "oracle_rel_err"};
  for (int j = 0; j < n; ++j) tail.push_back("dK_dx" + std::to_string(j + 1));
  for (int j = 0; j < n; ++j) tail.push_back("dK_dy" + std::to_string(j + 1));
  tail.insert(tail.end(), {"fd_deviation", "fd_self_consistency"});
  Table t = ctx.table("sweep", {"p"}, tail);

  std::vector<std::pair<double, Point>> jobs;
  for (double p : c.p_values)
    for (const Point& z : c.all_points()) jobs.emplace_back(p, z);
  struct Row {
    std::vector<Table::Cell> cells;
    double rel = -1.0, dev = -1.0;
    bool hard = false;
  };
  auto rows = parallel_map(jobs.size(), ctx.workers(), [&](std::size_t i) {
    const auto [p, z] = jobs[i];
    Row r;
    r.cells = row_start({p});
    ctx.z_cells(r.cells, z);
    auto skipped = [&](const std::string& why) {
      r.cells.insert(r.cells.end(), {std::string("skipped"), why, std::nan(""), std::nan("")});
      for (int j = 0; j < 2 * n + 2; ++j) r.cells.push_back(std::nan(""));
      return r;
    };
    if (!ctx.domain.contains(z)) return skipped("outside the domain");
    if (boundary_distance(ctx.domain, z) < margin) return skipped("inside the boundary margin");
    try {
      const ExtremalSolution s = solve_min(space, p, z, ctx.options);
      const GradientCheck g = gradient_identity(space, p, z, ctx.options, &s);
      const auto oracle = closed_form_kernel(ctx.domain, z);
      r.rel = oracle ? std::abs(s.K_p_z - *oracle) / *oracle : -1.0;
      r.dev = std::max(g.deviation, g.deviation_half);
      r.cells.insert(r.cells.end(), {std::string("ok"), std::string(""), s.K_p_z, oracle ? r.rel : std::nan("")});
      for (double x : g.analytic) r.cells.push_back(x);
      r.cells.insert(r.cells.end(), {g.deviation, g.self_consistency});
    } catch (const InvalidInput& e) {
      return skipped(e.what());
    } catch (const std::runtime_error& e) {
      r = skipped(std::string("solver failure: ") + e.what());
      r.cells[n + 1] = std::string("failed");
      r.hard = true;
    }
    return r;
  });

  RunOutcome out;
  out.bundle.title = "pberg sweep on " + ctx.domain.name();
  out.bundle.config = c.to_json();
  bool hard = false;
  for (double p : c.p_values) {
    double rel = -1.0, dev = -1.0;
    std::size_t used = 0, skipped = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].first != p) continue;
      hard = hard || rows[i].hard;
      if (rows[i].dev < 0.0) {
        ++skipped;
        continue;
      }
      ++used;
      rel = std::max(rel, rows[i].rel);
      dev = std::max(dev, rows[i].dev);
    }
    const Json in = ctx.inputs({{"p", p}, {"grid", c.grid}, {"boundary_margin", margin}});
    const Json counts{{"rows", used}, {"skipped", skipped}};
    if (used == 0) {
      out.bundle.records.push_back(skip("sweep", in, "every grid point was skipped", counts));
      continue;
    }
    if (rel >= 0.0) {
      Json v = counts;
      v["max_rel_err"] = rel;
      out.bundle.records.push_back(
          make_record("sweep.kernel", anchor_of("kernel_oracle"), in, v, -rel, c.tolerance("sweep", p == 2.0 ? 1e-6 : 1e-4)));
    }
    Json v = counts;
    v["max_fd_deviation"] = dev;
    out.bundle.records.push_back(make_record("sweep.gradient", anchor_of("gradient_identity"), in, v, -dev,
                                             c.tolerance("gradient_identity", 1e-3)));
  }
  for (auto& r : rows) t.add(std::move(r.cells));
  out.bundle.tables.push_back(std::move(t));
  out.exit_code = exit_code(out.bundle, hard);
  if (!c.out.empty()) write_bundle(out.bundle, c.out);
  return out;
}

std::vector<std::string> suite_names() { return {"disc-core", "full"}; }

std::vector<RunConfig> suite_configs(const std::string& suite) {
  auto cfg = [](std::string domain, std::vector<double> p, std::vector<Point> pts, std::vector<std::string> checks) {
    RunConfig c;
    c.domain = std::move(domain);
    c.p_values = std::move(p);
    c.points = std::move(pts);
    c.checks = std::move(checks);
    return c;
  };
  auto disc = [](std::initializer_list<cplx> z) {
    std::vector<Point> out;
    for (cplx w : z) out.push_back({w, 0.0});
    return out;
  };
  const cplx i(0.0, 1.0);
  std::vector<RunConfig> out;
  if (suite != "disc-core" && suite != "full") throw ConfigError("unknown suite '" + suite + "' (disc-core, full)");

  RunConfig k = cfg("unit_disc", {1.05, 1.5, 2.0, 3.0, 4.0}, disc({0.0, 0.3, 0.5, 0.7}), {"kernel_oracle", "reproducing"});
  k.degrees = {24, 32};
  out.push_back(k);
  out.push_back(cfg("unit_disc", {1.5, 2.0, 3.0}, disc({0.0, 0.3, 0.5, 0.7}), {"gradient_identity"}));
  out.push_back(cfg("unit_disc", {1.25, 1.5, 1.75, 2.0},
                    disc({0.1, 0.3 + 0.1 * i, -0.4 * i, -0.5, 0.2 - 0.5 * i, 0.6 + 0.2 * i, -0.3 + 0.3 * i, 0.7}),
                    {"levi"}));
  out.push_back(cfg("unit_disc", {2.0}, {}, {"inequalities"}));
  out.push_back(cfg("unit_disc", {1.0, 1.5, 2.0, 3.0},
                    disc({-0.5, -0.3 + 0.1 * i, -0.1, 0.1 + 0.1 * i, 0.3, 0.5 - 0.1 * i}), {"hat_h_lemma"}));
  out.push_back(cfg("unit_disc", {1.25, 1.5, 2.0}, disc({0.3, 0.5}), {"weighted_identity"}));
  out.push_back(cfg("unit_disc", {2.0}, disc({0.5, 0.3 + 0.2 * i}), {"p_sweep"}));
  out.push_back(cfg("unit_disc", {1.5, 2.0}, disc({0.5}), {"zero_free"}));
  out.push_back(cfg("unit_disc", {2.0}, disc({0.3, 0.5, 0.7, 0.9}), {"series_atlas"}));
  out.push_back(cfg("unit_disc", {2.0}, disc({0.5}), {"p1_limit"}));
  if (suite == "disc-core") return out;

  const std::vector<Point> bi{{0.0, 0.0},
                              {0.3, 0.2},
                              {cplx(0.1, 0.2), -0.3},
                              {-0.4, 0.3 * i},
                              {cplx(0.2, -0.3), cplx(0.2, 0.2)},
                              {0.5, cplx(-0.1, 0.1)}};
  out.push_back(cfg("bidisc", {1.5, 2.0, 3.0}, bi, {"kernel_oracle"}));
  out.push_back(cfg("bidisc", {2.0, 3.0}, bi, {"gradient_identity"}));
  RunConfig h = cfg("bidisc", {1.5, 3.0, 4.0}, {{0.3, 0.2}}, {"holder"});
  h.direction = {1.0, 0.5};
  h.probe = {{0.1, -0.2}};
  out.push_back(h);
  std::vector<Point> levi_pts{{0.1, 0.0},  {0.3, 0.2},       {cplx(0.0, -0.3), 0.1}, {-0.4, cplx(0.2, 0.2)},
                              {0.2, -0.5}, {cplx(0.3, 0.3), 0.0}, {-0.1, cplx(0.0, 0.4)}, {0.5, 0.3}};
  out.push_back(cfg("bidisc", {1.25, 1.5, 1.75, 2.0}, levi_pts, {"levi"}));
  out.push_back(cfg("bidisc", {2.0}, {{0.3, 0.2}, {cplx(0.1, 0.2), -0.3}}, {"p_sweep"}));
  out.push_back(cfg("bidisc", {2.0}, {{0.3, 0.2}}, {"zero_free", "p1_limit"}));
  out.push_back(cfg("bidisc", {2.0}, {{0.3, 0.2}, {0.5, -0.4}, {cplx(0.0, 0.6), 0.2}}, {"series_atlas"}));
  RunConfig ex = cfg("reinhardt:lp:1", {2.0}, {}, {"boundary_experiment"});
  ex.direction = {1.0, 0.25};
  out.push_back(ex);
  return out;
}

RunOutcome verify(const std::string& suite, const RunConfig& base) {
  std::vector<RunConfig> configs = suite_configs(suite);
  for (auto& c : configs) {
    c.seed = base.seed;
    c.workers = base.workers;
    c.tolerances = base.tolerances;
    validate(c);
  }
  RunOutcome out;
  out.bundle.title = "pberg verify " + suite;
  out.bundle.config = Json::array();
  bool hard = false;
  for (auto& c : configs) {
    RunOutcome r = run(c);
    hard = hard || r.exit_code == 3;
    out.bundle.config.push_back(c.to_json());
    out.bundle.append(std::move(r.bundle));
  }
  // tables from different stages share names
  std::map<std::string, int> seen;
  for (auto& t : out.bundle.tables) {
    const int k = seen[t.name]++;
    if (k) t.name += "_" + std::to_string(k + 1);
  }
  out.exit_code = exit_code(out.bundle, hard);
  if (!base.out.empty()) write_bundle(out.bundle, base.out);
  return out;
}

}  // namespace pberg
