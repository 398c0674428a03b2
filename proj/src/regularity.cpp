#include "pberg/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace pberg {

namespace {

// |x|^{e} x with 0 at x = 0.
cplx dual_power(cplx x, double e) {
  const double ax = std::abs(x);
  return ax == 0.0 ? cplx(0.0) : std::pow(ax, e) * x;
}

struct NodePair {
  Eigen::VectorXcd a;  // K_p(., z') on the nodes
  Eigen::VectorXcd b;  // K_p(., z)
};

NodePair node_kernels(const ExtremalSolution& at_z, const ExtremalSolution& at_zp) {
  if (at_z.space != at_zp.space) throw InvalidInput("solutions must share one space");
  if (at_z.p != at_zp.p) throw InvalidInput("solutions must share one exponent");
  return {at_zp.node_values() * at_zp.K_p_z, at_z.node_values() * at_z.K_p_z};
}

double circle_max(const std::function<double(double)>& f, int count) {
  double best = -std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int k = 0; k < count; ++k) {
    const double v = f(2.0 * std::numbers::pi * k / count);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  const double step = 2.0 * std::numbers::pi / count;
  double lo = arg * step - step, hi = arg * step + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

HatH hat_H(const ExtremalSolution& at_z, const ExtremalSolution& at_zp) {
  const double p = at_z.p;
  const NodePair k = node_kernels(at_z, at_zp);
  const auto& w = at_z.space->rule().weights;
  double integral = 0.0;
  for (Eigen::Index i = 0; i < k.a.size(); ++i) {
    const cplx d = std::conj(dual_power(k.b[i], p - 2.0) - dual_power(k.a[i], p - 2.0)) * (k.b[i] - k.a[i]);
    integral += w[i] * d.real();
  }
  const double Kz = at_z.K_p_z, Kzp = at_zp.K_p_z;
  const cplx K_z_zp = at_zp.kernel(at_z.z);
  const cplx K_zp_z = at_z.kernel(at_zp.z);
  HatH h;
  h.kernel_form = std::pow(Kz, p - 1.0) + std::pow(Kzp, p - 1.0) -
                  (std::pow(Kz, p - 2.0) * K_z_zp + std::pow(Kzp, p - 2.0) * K_zp_z).real();
  h.integral_form = integral;
  h.scale = std::pow(Kz, p - 1.0) + std::pow(Kzp, p - 1.0);
  return h;
}

std::vector<LemmaMargin> lemma31_check(const ExtremalSolution& at_z, const ExtremalSolution& at_zp) {
  const double p = at_z.p;
  const NodePair k = node_kernels(at_z, at_zp);
  const auto& w = at_z.space->rule().weights;
  const HatH h = hat_H(at_z, at_zp);
  std::vector<LemmaMargin> out;
  auto add = [&](const std::string& name, double lhs, double rhs) {
    LemmaMargin m;
    m.name = name;
    m.lhs = lhs;
    m.rhs = rhs;
    m.margin = rhs - lhs;
    m.scale = h.scale;
    out.push_back(m);
  };
  if (p == 1.0) {
    double lhs = 0.0;
    for (Eigen::Index i = 0; i < k.a.size(); ++i) {
      const double s = std::abs(k.a[i]) + std::abs(k.b[i]);
      if (s == 0.0) continue;
      const double im = (std::conj(k.a[i]) * k.b[i]).imag();
      lhs += w[i] * im * im / (s * s * s);
    }
    add("q1_imaginary", lhs, h.kernel_form);
  } else if (p <= 2.0) {
    double lhs = 0.0;
    for (Eigen::Index i = 0; i < k.a.size(); ++i) {
      const double s = std::abs(k.a[i]) + std::abs(k.b[i]);
      if (s == 0.0) continue;
      lhs += w[i] * std::pow(s, p - 2.0) * std::norm(k.a[i] - k.b[i]);
    }
    add("leq2_weighted", lhs, h.kernel_form / (p - 1.0));
  } else {
    double weighted = 0.0, power = 0.0;
    for (Eigen::Index i = 0; i < k.a.size(); ++i) {
      const double d = std::abs(k.a[i] - k.b[i]);
      weighted += w[i] * (std::pow(std::abs(k.a[i]), p - 2.0) + std::pow(std::abs(k.b[i]), p - 2.0)) * d * d;
      power += w[i] * std::pow(d, p);
    }
    add("geq2_weighted", weighted, 2.0 * h.kernel_form);
    add("geq2_power", power, std::pow(2.0, p - 1.0) * h.kernel_form);
  }
  return out;
}

double kernel_difference_norm(const ExtremalSolution& at_z, const ExtremalSolution& at_zp) {
  const NodePair k = node_kernels(at_z, at_zp);
  const auto& w = at_z.space->rule().weights;
  double s = 0.0;
  for (Eigen::Index i = 0; i < k.a.size(); ++i) s += w[i] * std::pow(std::abs(k.a[i] - k.b[i]), at_z.p);
  return std::pow(s, 1.0 / at_z.p);
}

double prop32_ratio(const std::vector<ExtremalSolution>& solutions) {
  double worst = 0.0;
  for (std::size_t i = 0; i < solutions.size(); ++i)
    for (std::size_t j = i + 1; j < solutions.size(); ++j) {
      const double dz = distance(solutions[i].z, solutions[j].z);
      if (dz == 0.0) continue;
      const double n = kernel_difference_norm(solutions[i], solutions[j]);
      if (n == 0.0) continue;
      worst = std::max(worst, hat_H(solutions[i], solutions[j]).kernel_form / (dz * n));
    }
  return worst;
}

std::vector<double> analytic_gradient(const ExtremalSolution& sol) {
  const int n = sol.space->domain().dimension();
  std::vector<double> g(2 * n);
  for (int j = 0; j < n; ++j) {
    const cplx d = sol.K_p_z * sol.minimizer_derivative(sol.z, real_unit_vector(n, j));
    g[j] = sol.p * d.real();
    g[n + j] = -sol.p * d.imag();
  }
  return g;
}

GradientCheck gradient_identity(SpacePtr space, double p, const Point& z, const SolverOptions& options,
                                const ExtremalSolution* center) {
  const int n = space->domain().dimension();
  const double delta = boundary_distance(space->domain(), z);
  const double h = std::max(1e-4, std::cbrt(options.tol)) * delta;
  if (h < 1e3 * options.tol) throw InvalidInput("finite-difference step below 1e3 * tol");
  const ExtremalSolution c = center ? *center : solve_min(space, p, z, options);
  GradientCheck out;
  out.p = p;
  out.z = z;
  out.h = h;
  out.analytic = analytic_gradient(c);
  double gnorm = 0.0;
  for (double v : out.analytic) gnorm += v * v;
  out.scale = std::max(std::sqrt(gnorm), c.K_p_z);
  auto fd = [&](double step) {
    std::vector<double> g(2 * n);
    for (int j = 0; j < 2 * n; ++j) {
      const Point e = real_unit_vector(n, j);
      const double kp = solve_min(space, p, z + step * e, options, &c).K_p_z;
      const double km = solve_min(space, p, z - step * e, options, &c).K_p_z;
      g[j] = (kp - km) / (2.0 * step);
    }
    return g;
  };
  out.fd = fd(h);
  out.fd_half = fd(h / 2.0);
  for (int j = 0; j < 2 * n; ++j) {
    out.deviation = std::max(out.deviation, std::abs(out.fd[j] - out.analytic[j]) / out.scale);
    out.deviation_half = std::max(out.deviation_half, std::abs(out.fd_half[j] - out.analytic[j]) / out.scale);
    out.self_consistency = std::max(out.self_consistency, std::abs(out.fd[j] - out.fd_half[j]) / out.scale);
  }
  return out;
}

double holder_target(double p) {
  if (!(p > 1.0)) throw InvalidInput("Holder target requires p > 1");
  return p <= 2.0 ? 1.0 : p / (2.0 * p - 2.0);
}

HolderFit holder_fit(const std::vector<double>& distance, const std::vector<double>& difference, double noise_floor) {
  if (distance.size() != difference.size()) throw InvalidInput("distance and difference sizes differ");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < distance.size(); ++i)
    if (distance[i] > 0.0 && difference[i] > noise_floor) {
      x.push_back(std::log(distance[i]));
      y.push_back(std::log(difference[i]));
    }
  HolderFit fit;
  fit.total = distance.size();
  fit.used = x.size();
  if (x.size() < 3) throw InvalidInput("fewer than three pairs above the noise floor");
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.alpha_hat = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - my - fit.alpha_hat * (x[i] - mx);
    rss += r * r;
  }
  fit.stderr_alpha = std::sqrt(rss / std::max(1.0, n - 2.0) / sxx);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  fit.decades = (*hi - *lo) / std::log(10.0);
  return fit;
}

HolderSamples holder_samples(SpacePtr space, double p, const Point& z0, const Point& v, const Point& zeta,
                             double t_min, double t_max, int count, const SolverOptions& options) {
  if (!(t_min > 0.0 && t_max > t_min) || count < 2) throw InvalidInput("invalid Holder sampling range");
  const double nv = norm(v);
  if (nv == 0.0) throw InvalidInput("direction must be nonzero");
  const Point u = (1.0 / nv) * v;
  const ExtremalSolution base = solve_min(space, p, z0, options);
  const std::vector<double> g0 = analytic_gradient(base);
  const cplx k0 = base.kernel(zeta);
  HolderSamples out;
  ExtremalSolution prev = base;
  for (int k = 0; k < count; ++k) {
    const double t = t_min * std::pow(t_max / t_min, double(k) / (count - 1));
    const ExtremalSolution s = solve_min(space, p, z0 + t * u, options, &prev);
    const std::vector<double> g = analytic_gradient(s);
    double dg = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) dg += (g[j] - g0[j]) * (g[j] - g0[j]);
    out.distance.push_back(t);
    out.gradient_difference.push_back(std::sqrt(dg));
    out.kernel_difference.push_back(std::abs(s.kernel(zeta) - k0));
    prev = s;
  }
  return out;
}

LeviSample levi_check(SpacePtr space, double p, const Point& z, const Point& X, double r,
                      const SolverOptions& options, int angles) {
  if (!(p > 1.0)) throw InvalidInput("Levi check requires p > 1");
  if (norm(X) == 0.0) throw InvalidInput("direction X must be nonzero");
  if (!(r > 0.0) || angles < 4) throw InvalidInput("invalid Levi stencil");
  LeviSample out;
  out.p = p;
  out.z = z;
  out.X = X;
  const ExtremalSolution c = solve_min(space, p, z, options);
  const double u0 = std::log(c.K_p_z);
  ExtremalSolution prev = c;
  for (double radius : {r, r / 2.0, r / 4.0}) {
    double avg = 0.0;
    for (int m = 0; m < angles; ++m) {
      const cplx e = std::polar(radius, 2.0 * std::numbers::pi * m / angles);
      const ExtremalSolution s = solve_min(space, p, z + e * X, options, &prev);
      avg += std::log(s.K_p_z) / angles;
      prev = s;
    }
    out.radii.push_back(radius);
    out.T.push_back((avg - u0) / (radius * radius));
  }
  const double r1a = (4.0 * out.T[1] - out.T[0]) / 3.0;
  const double r1b = (4.0 * out.T[2] - out.T[1]) / 3.0;
  out.lhs = (16.0 * r1b - r1a) / 15.0;
  const double d1 = std::abs(out.T[0] - out.T[1]), d2 = std::abs(out.T[1] - out.T[2]);
  out.converged = d2 <= d1 || d2 <= 1e-8 * std::max(1.0, std::abs(out.lhs));

  const DirectionalFunctional hat = derivative_functional(space, p, z, X, options);
  const double q = p / (p - 1.0);
  out.B_hat = std::pow(c.K_p_z, -1.0 / p) * hat.value;
  out.XK_over_K = 0.5 * p * std::abs(c.minimizer_derivative(z, X));
  out.rhs = 0.25 * p * q * out.B_hat * out.B_hat - (q - 1.0) * out.XK_over_K * out.XK_over_K;
  out.margin = out.rhs - out.lhs;
  out.scale = std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-300});
  return out;
}

PSweep p_sweep(SpacePtr space, const Point& z, const std::vector<double>& t_grid, double target_p,
               const SolverOptions& options) {
  if (t_grid.size() < 2) throw InvalidInput("p-sweep needs at least two exponents");
  std::vector<double> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  if (!std::binary_search(grid.begin(), grid.end(), target_p)) throw InvalidInput("target p must lie on the grid");
  const double volume = space->rule().total_weight();
  PSweep out;
  out.z = z;
  out.target_p = target_p;
  std::optional<ExtremalSolution> prev;
  for (double t : grid) {
    const ExtremalSolution s = prev ? solve_min(space, t, z, options, &*prev) : solve_min(space, t, z, options);
    out.rows.push_back({t, s.K_p_z, std::pow(volume * s.K_p_z, 1.0 / t)});
    prev = s;
  }
  out.monotonicity_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < out.rows.size(); ++k)
    out.monotonicity_margin =
        std::min(out.monotonicity_margin, (out.rows[k].normalized - out.rows[k + 1].normalized) / out.rows[k].normalized);
  const auto it = std::find_if(out.rows.begin(), out.rows.end(), [&](const SweepRow& r) { return r.t == target_p; });
  const double Kp = it->K;
  // differences below the degree d-2 to d change of K_p are not resolved
  if (space->degree() >= 4) {
    const SpacePtr coarse = make_space(space->domain(), space->degree() - 2);
    out.truncation = std::abs(solve_min(coarse, target_p, z, options).K_p_z - Kp);
  }
  const double noise = std::max(1e-9 * Kp, out.truncation);
  for (const SweepRow& r : out.rows) {
    const double ds = std::abs(r.t - target_p);
    if (ds == 0.0) continue;
    const double denom = ds * std::abs(std::log(ds));
    if (denom == 0.0) continue;
    const double diff = std::abs(r.K - Kp);
    out.modulus_ratio = std::max(out.modulus_ratio, diff <= noise ? 0.0 : diff / denom);
    out.noise_ratio = std::max(out.noise_ratio, noise / denom);
  }
  return out;
}

K1Probe k1_limit_probe(SpacePtr space, const Point& z, const std::vector<double>& p_sequence,
                       const std::vector<Point>& probe, const SolverOptions& options) {
  if (p_sequence.size() < 2) throw InvalidInput("p sequence needs at least two entries");
  for (std::size_t k = 0; k + 1 < p_sequence.size(); ++k)
    if (!(p_sequence[k] > p_sequence[k + 1] && p_sequence[k + 1] > 1.0))
      throw InvalidInput("p sequence must decrease strictly towards 1");
  K1Probe out;
  std::vector<ExtremalSolution> sols;
  for (double p : p_sequence) {
    sols.push_back(sols.empty() ? solve_min(space, p, z, options) : solve_min(space, p, z, options, &sols.back()));
    out.p.push_back(p);
    out.K.push_back(sols.back().K_p_z);
  }
  for (std::size_t k = 0; k + 1 < sols.size(); ++k) {
    out.K_differences.push_back(std::abs(out.K[k] - out.K[k + 1]) / out.K[k + 1]);
    double sup = 0.0;
    for (const Point& zeta : probe) sup = std::max(sup, std::abs(sols[k].minimizer(zeta) - sols[k + 1].minimizer(zeta)));
    out.minimizer_sup_diffs.push_back(sup);
  }
  for (std::size_t k = 0; k + 1 < out.minimizer_sup_diffs.size(); ++k)
    if (out.minimizer_sup_diffs[k + 1] > out.minimizer_sup_diffs[k]) out.monotone_shrinking = false;
  return out;
}

double borel_caratheodory_margin(const std::vector<cplx>& c, double r, double R, int boundary_points) {
  if (!(0.0 < r && r < R)) throw InvalidInput("Borel-Caratheodory needs 0 < r < R");
  auto h = [&](cplx x) {
    cplx s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
  };
  const double lhs = circle_max([&](double t) { return std::abs(h(std::polar(r, t))); }, boundary_points);
  const double sup_im = circle_max([&](double t) { return h(std::polar(R, t)).imag(); }, boundary_points);
  const double h0 = c.empty() ? 0.0 : std::abs(c[0]);
  const double rhs = 2.0 * r / (R - r) * sup_im + (R + r) / (R - r) * h0;
  return (rhs - lhs) / std::max({std::abs(rhs), lhs, 1e-300});
}

BorelCaratheodory borel_caratheodory_suite(std::size_t samples, std::uint64_t seed, int boundary_points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  BorelCaratheodory out;
  out.samples = samples;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const double R = std::exp(std::log(0.5) + unit(rng) * std::log(4.0));
    const double r = R * (0.02 + 0.96 * unit(rng));
    const int degree = int(unit(rng) * 9.0);
    std::vector<cplx> c(degree + 1);
    for (int k = 0; k <= degree; ++k) c[k] = cplx(normal(rng), normal(rng)) / std::pow(R, k);
    if (unit(rng) < 0.1) c[0] = 0.0;
    const double m = borel_caratheodory_margin(c, r, R, boundary_points);
    out.worst_margin = std::min(out.worst_margin, m);
    if (m < -1e-12) ++out.violations;
  }
  return out;
}

}  // namespace pberg
