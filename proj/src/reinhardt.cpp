#include "pberg/reinhardt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "pberg/weighted.hpp"

namespace pberg {

using std::numbers::pi;

MomentTable::MomentTable(const Domain& domain, int degree) : domain_(domain), degree_(degree) {
  if (degree < 2) throw InvalidInput("series degree must be at least 2");
  const int n = domain.dimension();
  c_.assign(degree + 1, {});
  for (int a = 0; a <= degree; ++a) {
    const int top = n == 1 ? 0 : degree - a;
    c_[a].resize(top + 1);
    for (int b = 0; b <= top; ++b) {
      c_[a][b] = exact_moment(domain, {a, b});
      if (!(c_[a][b] > 0.0) || !std::isfinite(c_[a][b]))
        throw InvalidInput("moment computation failed for index (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
  }
}

double MomentTable::moment(const MultiIndex& alpha) const {
  if (alpha[0] < 0 || alpha[1] < 0 || alpha[0] > degree_ || alpha[1] >= int(c_[alpha[0]].size()))
    throw InvalidInput("multi-index outside the moment table");
  return c_[alpha[0]][alpha[1]];
}

MomentTable::Value MomentTable::evaluate(const Point& zeta, const Point& z) const {
  const cplx w1 = zeta[0] * std::conj(z[0]);
  const cplx w2 = dimension() == 1 ? cplx(0.0) : zeta[1] * std::conj(z[1]);
  const double a1 = std::abs(w1), a2 = std::abs(w2);
  std::vector<cplx> p1(degree_ + 1), p2(degree_ + 1);
  std::vector<double> m1(degree_ + 1), m2(degree_ + 1);
  p1[0] = p2[0] = 1.0;
  m1[0] = m2[0] = 1.0;
  for (int e = 1; e <= degree_; ++e) {
    p1[e] = p1[e - 1] * w1;
    p2[e] = p2[e - 1] * w2;
    m1[e] = m1[e - 1] * a1;
    m2[e] = m2[e - 1] * a2;
  }
  std::vector<double> graded(degree_ + 1, 0.0);
  Value v;
  v.kernel = 0.0;
  for (int a = 0; a <= degree_; ++a)
    for (std::size_t b = 0; b < c_[a].size(); ++b) {
      v.kernel += p1[a] * p2[b] / c_[a][b];
      graded[a + b] += m1[a] * m2[b] / c_[a][b];
    }
  const double Td = graded[degree_], T1 = graded[degree_ - 1], T2 = graded[degree_ - 2];
  if (Td == 0.0) return v;
  double rho = 0.0;
  if (T1 > 0.0) rho = Td / T1;
  if (T2 > 0.0) rho = std::max(rho, T1 / T2);
  if (!(rho < 1.0)) {
    v.tail_valid = false;
    v.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    v.tail_bound = Td * rho / (1.0 - rho);
  }
  return v;
}

cplx MomentTable::minimizer(const Point& zeta, const Point& z) const { return kernel(zeta, z) / kernel(z, z).real(); }

Eigen::VectorXcd MomentTable::slice_polynomial(int j, const Point& zeta, const Point& z) const {
  const int k = 1 - j;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(degree_ + 1);
  const cplx wj = std::conj(z[j]);
  const cplx wk = dimension() == 1 ? cplx(0.0) : zeta[k] * std::conj(z[k]);
  for (int a = 0; a <= degree_; ++a)
    for (std::size_t b = 0; b < c_[a].size(); ++b) {
      const MultiIndex alpha{a, int(b)};
      const int ej = alpha[j], ek = alpha[k];
      c[ej] += std::pow(wj, ej) * (ek == 0 ? cplx(1.0) : std::pow(wk, ek)) / c_[a][b];
    }
  return c;
}

MomentTable k2_series(const Domain& domain, int degree) {
  if (domain.dimension() == 2 && domain.kind() != DomainKind::bidisc && domain.kind() != DomainKind::ball2 &&
      domain.kind() != DomainKind::reinhardt_radial)
    throw InvalidInput("series kernel requires a complete Reinhardt model domain");
  return MomentTable(domain, degree);
}

std::string to_string(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::zero_free: return "zero_free";
    case ZeroVerdict::has_zero: return "has_zero";
    case ZeroVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

// Largest |zeta_j| allowed when the other coordinate has modulus s.
double slice_radius(const Domain& d, int j, double s) {
  if (d.dimension() == 1) return d.radius();
  switch (d.kind()) {
    case DomainKind::bidisc: return s < 1.0 ? 1.0 : 0.0;
    case DomainKind::ball2: return s < 1.0 ? std::sqrt(1.0 - s * s) : 0.0;
    case DomainKind::reinhardt_radial: {
      const RadialProfile& g = *d.profile();
      if (j == 1) return s < g.support() ? g(s) : 0.0;
      return g.fiber_radius(s);
    }
    default: return 0.0;
  }
}

double sup_radius(const Domain& d, int j) { return slice_radius(d, j, 0.0); }

std::vector<cplx> polynomial_roots(Eigen::VectorXcd c) {
  Eigen::Index deg = c.size() - 1;
  const double big = c.cwiseAbs().maxCoeff();
  while (deg > 0 && std::abs(c[deg]) <= 1e-300 * std::max(1.0, big)) --deg;
  std::vector<cplx> roots;
  if (deg == 0) return roots;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (Eigen::Index i = 0; i < deg; ++i) comp(0, i) = -c[deg - 1 - i] / c[deg];
  for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  for (Eigen::Index i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()[i]);
  return roots;
}

}  // namespace

WindingResult winding_number(const std::function<cplx(cplx)>& f, cplx center, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("winding radius must be positive");
  struct Sample {
    double t;
    cplx v;
  };
  const int base = 64;
  std::vector<Sample> s;
  double vmax = 0.0;
  for (int k = 0; k <= base; ++k) {
    const double t = 2.0 * pi * k / base;
    s.push_back({t, f(center + std::polar(radius, t))});
    vmax = std::max(vmax, std::abs(s.back().v));
  }
  if (vmax == 0.0) throw InvalidInput("function vanishes on the circle");
  WindingResult w;
  w.radius = radius;
  w.min_modulus = std::numeric_limits<double>::infinity();
  double total = 0.0;
  const double floor = 1e-13 * vmax;
  std::function<void(const Sample&, const Sample&, int)> walk = [&](const Sample& a, const Sample& b, int depth) {
    if (std::abs(a.v) <= floor || std::abs(b.v) <= floor) throw InvalidInput("function vanishes on the circle");
    w.min_modulus = std::min({w.min_modulus, std::abs(a.v), std::abs(b.v)});
    const double step = std::arg(b.v / a.v);
    if (std::abs(step) <= pi / 8.0 || depth > 30) {
      if (std::abs(step) > pi / 8.0) throw InvalidInput("argument increment unresolved on the circle");
      total += step;
      return;
    }
    const double tm = 0.5 * (a.t + b.t);
    const Sample m{tm, f(center + std::polar(radius, tm))};
    walk(a, m, depth + 1);
    walk(m, b, depth + 1);
  };
  for (int k = 0; k < base; ++k) walk(s[k], s[k + 1], 0);
  w.raw = total / (2.0 * pi);
  w.order = int(std::lround(w.raw));
  return w;
}

WindingResult zero_order(const std::function<cplx(cplx)>& f, cplx center, double radius) {
  for (int retry = 0;; ++retry) {
    const double r = radius * (1.0 + 0.07 * retry * (retry % 2 ? 1.0 : -1.0));
    try {
      WindingResult w = winding_number(f, center, r);
      w.retries = retry;
      return w;
    } catch (const InvalidInput&) {
      if (retry == 5) throw;
    }
  }
}

WindingResult zero_order(const MomentTable& series, const Point& z0, const Point& zeta0, const Point& v,
                         double radius) {
  const double nv = norm(v);
  if (nv == 0.0) throw InvalidInput("probe line direction must be nonzero");
  const Point u = (1.0 / nv) * v;
  return zero_order([&](cplx t) { return series.minimizer(zeta0 + t * u, z0); }, 0.0, radius);
}

ZeroClassification classify(const MomentTable& series, const Point& z, int search_budget, double margin) {
  const Domain& dom = series.domain();
  if (!dom.contains(z)) throw InvalidInput("classification point must lie inside the domain");
  if (search_budget < 1) throw InvalidInput("search budget must be positive");
  const int n = dom.dimension();
  ZeroClassification out;
  out.z = z;
  const double Kzz = series.kernel(z, z).real();
  int j = 0;
  if (n == 2 && std::abs(z[1]) > std::abs(z[0])) j = 1;
  const int k = 1 - j;
  if (std::abs(z[j]) == 0.0) {
    out.verdict = ZeroVerdict::zero_free;
    out.min_modulus = 1.0;
    out.diagnostic = "kernel is constant in zeta";
    return out;
  }
  // slices: values of the other coordinate
  std::vector<cplx> others{0.0};
  if (n == 2 && std::abs(z[k]) > 0.0) {
    others.clear();
    const int nr = std::max(2, int(std::sqrt(search_budget / 2.0)));
    const int nt = std::max(1, search_budget / nr);
    const double top = (1.0 - margin) * sup_radius(dom, k);
    for (int a = 0; a < nr; ++a)
      for (int b = 0; b < nt; ++b) others.push_back(std::polar(top * a / (nr - 1), 2.0 * pi * b / nt));
  }
  out.min_modulus = std::numeric_limits<double>::infinity();
  std::size_t uncertified = 0;
  for (cplx other : others) {
    Point base{};
    if (n == 2) base[k] = other;
    const double full = slice_radius(dom, j, std::abs(other));
    const double R = (1.0 - margin) * full;
    if (!(R > 0.0)) continue;
    auto at = [&](cplx t) {
      Point x = base;
      x[j] = t;
      return x;
    };
    for (int a = 1; a <= 8; ++a)
      for (int b = 0; b < 16; ++b) {
        const MomentTable::Value v = series.evaluate(at(std::polar(R * a / 8.0, 2.0 * pi * b / 16.0)), z);
        if (std::abs(v.kernel) / Kzz < out.min_modulus) {
          out.min_modulus = std::abs(v.kernel) / Kzz;
          out.witness = at(std::polar(R * a / 8.0, 2.0 * pi * b / 16.0));
        }
        out.max_tail = std::max(out.max_tail, v.tail_bound / Kzz);
      }
    const std::vector<cplx> roots = polynomial_roots(series.slice_polynomial(j, base, z));
    for (std::size_t r = 0; r < roots.size(); ++r) {
      const cplx root = roots[r];
      if (!(std::abs(root) < R)) continue;
      double rad = 0.9 * (full - std::abs(root));
      for (std::size_t q = 0; q < roots.size(); ++q)
        if (q != r) rad = std::min(rad, 0.5 * std::abs(roots[q] - root));
      out.min_modulus = 0.0;
      out.witness = at(root);
      bool certified = false;
      try {
        const WindingResult w = winding_number([&](cplx t) { return series.kernel(at(root + t), z); }, 0.0, rad);
        double tail = 0.0;
        for (int m = 0; m < 64; ++m) {
          const MomentTable::Value v = series.evaluate(at(root + std::polar(rad, 2.0 * pi * m / 64)), z);
          tail = v.tail_valid ? std::max(tail, v.tail_bound) : std::numeric_limits<double>::infinity();
        }
        if (w.order >= 1 && tail < w.min_modulus) {
          certified = true;
          out.winding = w.order;
        }
      } catch (const InvalidInput&) {
      }
      if (certified) {
        out.verdict = ZeroVerdict::has_zero;
        out.diagnostic = "zero certified by winding number " + std::to_string(out.winding);
        return out;
      }
      ++uncertified;
    }
  }
  if (uncertified == 0 && out.min_modulus > 2.0 * out.max_tail) {
    out.verdict = ZeroVerdict::zero_free;
    out.diagnostic = "no slice roots in the search region";
  } else {
    out.verdict = ZeroVerdict::inconclusive;
    out.diagnostic = uncertified ? std::to_string(uncertified) + " slice roots not certified"
                                 : "truncation error overlaps the minimum modulus";
  }
  return out;
}

MpkReport mpk_probe(SpacePtr space, int k_max, const Point& z0, const std::vector<Point>& probe,
                    const SolverOptions& options) {
  if (k_max < 1) throw InvalidInput("k must be at least 1");
  MpkReport r;
  r.z0 = z0;
  const ExtremalSolution m2 = solve_min(space, 2.0, z0, options);
  const ZeroFreeGate gate = zero_free_gate(space, m2.coefficients);
  r.gate_passed = gate.passed;
  r.gate_diagnostic = gate.diagnostic;
  if (!gate.passed) return r;
  ExtremalSolution prev = m2;
  for (int k = 1; k <= k_max; ++k) {
    MpkEntry e;
    e.k = k;
    try {
      const ExtremalSolution mk = k == 1 ? m2 : solve_min(space, 2.0 * k, z0, options, &prev);
      for (const Point& zeta : probe)
        e.sup_deviation = std::max(e.sup_deviation, std::abs(m2.minimizer(zeta) - std::pow(mk.minimizer(zeta), k)));
      e.converged = true;
      r.largest_converged_k = k;
      prev = mk;
    } catch (const SolverFailure& ex) {
      e.diagnostic = ex.what();
      r.entries.push_back(e);
      break;
    }
    r.entries.push_back(e);
  }
  return r;
}

namespace {

Point boundary_projection(const Domain& d, const Point& zeta) {
  double lo = 1.0, hi = 1.0;
  while (d.contains(hi * zeta)) hi *= 1.25;
  while (!d.contains(lo * zeta)) lo *= 0.8;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (d.contains(mid * zeta) ? lo : hi) = mid;
  }
  return lo * zeta;
}

Point complex_normal(const Domain& d, const Point& zeta) {
  const double r1 = std::abs(zeta[0]), r2 = std::abs(zeta[1]);
  Point nrm{};
  if (d.kind() == DomainKind::reinhardt_radial && r1 > 0.0 && r2 > 0.0) {
    const double slope = d.profile()->derivative(r1);
    nrm = {-slope * zeta[0] / r1, zeta[1] / r2};
  } else {
    nrm = zeta;
  }
  return (1.0 / norm(nrm)) * nrm;
}

}  // namespace

BoundaryExperiment boundary_experiment(const MomentTable& series, const Point& direction, double s_max, int steps,
                                       const std::vector<int>& k_values) {
  const Domain& dom = series.domain();
  if (dom.dimension() != 2) throw InvalidInput("boundary experiment needs a domain in C^2");
  if (steps < 3) throw InvalidInput("need at least three scan steps");
  BoundaryExperiment ex;
  ex.profile = dom.name();
  const Point u = (1.0 / norm(direction)) * direction;
  ex.direction = u;
  std::vector<ZeroClassification> cls;
  for (int i = 0; i < steps; ++i) {
    const double s = s_max * (i + 1) / steps;
    if (!dom.contains(s * u)) break;
    ex.s_grid.push_back(s);
    cls.push_back(classify(series, s * u));
    ex.verdicts.push_back(cls.back().verdict);
  }
  for (std::size_t i = 1; i + 1 < ex.verdicts.size(); ++i)
    if (ex.verdicts[i] == ZeroVerdict::zero_free && ex.verdicts[i - 1] == ZeroVerdict::has_zero &&
        ex.verdicts[i + 1] == ZeroVerdict::has_zero)
      ++ex.closedness_anomalies;
  std::size_t hit = 0;
  for (std::size_t i = 1; i < ex.verdicts.size(); ++i)
    if (ex.verdicts[i] == ZeroVerdict::has_zero && ex.verdicts[i - 1] == ZeroVerdict::zero_free) {
      hit = i;
      break;
    }
  if (hit == 0) {
    ex.diagnostic = "no zero_free -> has_zero transition on the scan";
    return ex;
  }
  double lo = ex.s_grid[hit - 1], hi = ex.s_grid[hit];
  Point witness = cls[hit].witness;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    const ZeroClassification c = classify(series, mid * u);
    if (c.verdict == ZeroVerdict::has_zero) {
      hi = mid;
      witness = c.witness;
    } else if (c.verdict == ZeroVerdict::zero_free) {
      lo = mid;
    } else {
      break;
    }
  }
  ex.transition_found = true;
  ex.z0 = lo * u;
  ex.zeta0 = boundary_projection(dom, witness);
  ex.normal = complex_normal(dom, ex.zeta0);
  try {
    const WindingResult w = zero_order(series, ex.z0, ex.zeta0, ex.normal, 0.02);
    ex.k0 = w.order;
  } catch (const InvalidInput& e) {
    ex.diagnostic = std::string("order computation failed: ") + e.what();
  }
  for (int k : k_values) {
    std::vector<double> x, y;
    for (int m = 0; m < 16; ++m) {
      const double t = 1e-3 * std::pow(10.0, 2.0 * m / 15.0);
      const Point zeta = ex.zeta0 - t * ex.normal;
      if (!dom.contains(zeta)) continue;
      const double v = std::pow(std::abs(series.minimizer(zeta, ex.z0)), 1.0 / k);
      if (v == 0.0) continue;
      x.push_back(std::log(t));
      y.push_back(std::log(v));
    }
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (x.size() >= 3) {
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / x.size();
        my += y[i] / x.size();
      }
      double sxx = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
      }
      slope = sxy / sxx;
    }
    ex.k_values.push_back(k);
    ex.growth_exponent.push_back(slope);
  }
  return ex;
}

}  // namespace pberg
