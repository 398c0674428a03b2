#include "pberg/domain.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numbers>

#include <math.h>  // pchip.hpp uses unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace pberg {

using std::numbers::pi;

Point real_unit_vector(int n, int j) {
  Point e{};
  if (j < n)
    e[j] = 1.0;
  else
    e[j - n] = cplx(0.0, 1.0);
  return e;
}

std::string format_point(const Point& z, int n) {
  std::string out;
  char buf[96];
  for (int k = 0; k < n; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z[k].real(), z[k].imag());
    if (k) out += ",";
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile RadialProfile::lp(double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent))
    throw InvalidInput("lp profile exponent must be >= 1");
  RadialProfile p;
  p.name_ = exponent == 2.0 ? "ball2" : "lp:" + std::to_string(exponent);
  p.analytic_ = true;
  p.exponent_ = exponent;
  p.support_ = 1.0;
  return p;
}

RadialProfile RadialProfile::tabulated(std::vector<double> r, std::vector<double> g) {
  if (r.size() != g.size() || r.size() < 4)
    throw InvalidInput("tabulated profile needs >= 4 (r, g) pairs of equal length");
  if (r.front() != 0.0) throw InvalidInput("tabulated profile must start at r1 = 0");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw InvalidInput("tabulated profile radii must increase");
    if (g[i] > g[i - 1]) throw InvalidInput("profile violates monotonicity (must be nonincreasing)");
  }
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (!(g[i] > 0.0)) throw InvalidInput("profile must be positive on its support");
  if (g.back() < 0.0) throw InvalidInput("profile must be nonnegative");

  RadialProfile p;
  p.name_ = "tabulated";
  p.analytic_ = false;
  p.support_ = r.back();
  p.knots_ = r;
  p.values_ = g;
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(r),
                                                                                          std::move(g));
  p.interp_ = std::make_shared<std::function<double(double)>>([spline](double x) { return (*spline)(x); });
  p.interp_deriv_ =
      std::make_shared<std::function<double(double)>>([spline](double x) { return spline->prime(x); });
  return p;
}

double RadialProfile::operator()(double r1) const {
  if (r1 < 0.0) r1 = -r1;
  if (r1 > support_) return 0.0;
  if (analytic_) {
    const double t = exponent_;
    const double base = 1.0 - std::pow(r1, t);
    return base <= 0.0 ? 0.0 : std::pow(base, 1.0 / t);
  }
  return std::max(0.0, (*interp_)(r1));
}

double RadialProfile::derivative(double r1) const {
  if (r1 < 0.0 || r1 > support_) return 0.0;
  if (analytic_) {
    const double t = exponent_;
    const double base = 1.0 - std::pow(r1, t);
    if (base <= 0.0) return -std::numeric_limits<double>::infinity();
    return -std::pow(r1, t - 1.0) * std::pow(base, 1.0 / t - 1.0);
  }
  return (*interp_deriv_)(r1);
}

double RadialProfile::fiber_radius(double s) const {
  if (s < 0.0) s = -s;
  if (s >= sup()) return 0.0;
  if (s < (*this)(support_)) return support_;
  if (analytic_) return std::pow(1.0 - std::pow(s, exponent_), 1.0 / exponent_);
  double lo = 0.0, hi = support_;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) > s)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Domain

DomainDescriptor parse_descriptor(const std::string& text) {
  DomainDescriptor d;
  if (text == "unit_disc") {
    d.kind = DomainKind::unit_disc;
  } else if (text.rfind("disc:", 0) == 0 || text.rfind("disc(", 0) == 0) {
    d.kind = DomainKind::disc;
    std::string num = text.substr(5);
    if (!num.empty() && num.back() == ')') num.pop_back();
    try {
      d.radius = std::stod(num);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse disc radius in '" + text + "'");
    }
  } else if (text == "bidisc") {
    d.kind = DomainKind::bidisc;
  } else if (text == "ball2") {
    d.kind = DomainKind::ball2;
  } else if (text == "reinhardt:ball2") {
    d.kind = DomainKind::reinhardt_radial;
    d.profile = RadialProfile::lp(2.0);
  } else if (text.rfind("reinhardt:lp:", 0) == 0) {
    d.kind = DomainKind::reinhardt_radial;
    try {
      d.profile = RadialProfile::lp(std::stod(text.substr(13)));
    } catch (const InvalidInput&) {
      throw;
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse lp exponent in '" + text + "'");
    }
  } else {
    throw InvalidInput("unsupported domain descriptor '" + text + "'");
  }
  return d;
}

namespace {

double profile_volume(const RadialProfile& g) {
  // |Omega| = (2 pi)^2 int_0^R1 r1 g(r1)^2 / 2 dr1
  auto f = [&g](double r) { return r * g(r) * g(r) / 2.0; };
  double integral = 0.0;
  if (g.analytic()) {
    boost::math::quadrature::tanh_sinh<double> ts;
    integral = ts.integrate(f, 0.0, g.support());
  } else {
    const auto& k = g.knots();
    for (std::size_t i = 0; i + 1 < k.size(); ++i)
      integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, k[i], k[i + 1], 12, 1e-14);
  }
  return 4.0 * pi * pi * integral;
}

}  // namespace

Domain make_domain(const DomainDescriptor& descriptor) {
  Domain d;
  d.kind_ = descriptor.kind;
  switch (descriptor.kind) {
    case DomainKind::unit_disc:
      d.dimension_ = 1;
      d.radius_ = 1.0;
      d.volume_ = pi;
      break;
    case DomainKind::disc:
      if (!(descriptor.radius > 0.0) || !std::isfinite(descriptor.radius))
        throw InvalidInput("disc radius must be positive");
      d.dimension_ = 1;
      d.radius_ = descriptor.radius;
      d.volume_ = pi * descriptor.radius * descriptor.radius;
      break;
    case DomainKind::bidisc:
      d.dimension_ = 2;
      d.volume_ = pi * pi;
      break;
    case DomainKind::ball2:
      d.dimension_ = 2;
      d.volume_ = pi * pi / 2.0;
      break;
    case DomainKind::reinhardt_radial:
      if (!descriptor.profile) throw InvalidInput("reinhardt_radial domain needs a profile");
      d.dimension_ = 2;
      d.profile_ = descriptor.profile;
      d.volume_ = profile_volume(*d.profile_);
      break;
    default:
      throw InvalidInput("unsupported domain kind");
  }
  if (!(d.volume_ > 0.0) || !std::isfinite(d.volume_)) throw InvalidInput("domain volume must be positive and finite");
  return d;
}

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::unit_disc: return "unit_disc";
    case DomainKind::disc: return "disc:" + std::to_string(radius_);
    case DomainKind::bidisc: return "bidisc";
    case DomainKind::ball2: return "ball2";
    case DomainKind::reinhardt_radial: return "reinhardt:" + profile_->name();
  }
  return "unknown";
}

bool Domain::contains(const Point& z) const {
  const double r1 = std::abs(z[0]), r2 = std::abs(z[1]);
  switch (kind_) {
    case DomainKind::unit_disc:
    case DomainKind::disc: return r1 < radius_ && z[1] == 0.0;
    case DomainKind::bidisc: return r1 < 1.0 && r2 < 1.0;
    case DomainKind::ball2: return r1 * r1 + r2 * r2 < 1.0;
    case DomainKind::reinhardt_radial: return r1 < profile_->support() && r2 < (*profile_)(r1);
  }
  return false;
}

double Domain::fiber_radius(double s) const {
  switch (kind_) {
    case DomainKind::unit_disc:
    case DomainKind::disc: return radius_;
    case DomainKind::bidisc: return std::abs(s) < 1.0 ? 1.0 : 0.0;
    case DomainKind::ball2: return std::abs(s) < 1.0 ? std::sqrt(1.0 - s * s) : 0.0;
    case DomainKind::reinhardt_radial: return profile_->fiber_radius(s);
  }
  return 0.0;
}

namespace {

// Boundary point of the (r1, r2) shadow along the ray of angle psi.
std::array<double, 2> ray_boundary(const Domain& d, double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  auto inside = [&](double rho) { return d.contains(Point{rho * c, rho * s}); };
  double lo = 0.0, hi = 1.0;
  while (inside(hi)) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return {lo * c, lo * s};
}

double shadow_distance(const Domain& d, double r1, double r2) {
  auto dist = [&](double psi) {
    const auto b = ray_boundary(d, psi);
    return std::hypot(b[0] - r1, b[1] - r2);
  };
  constexpr int samples = 256;
  int best = 0;
  double best_val = dist(0.0);
  for (int k = 1; k <= samples; ++k) {
    const double v = dist(0.5 * pi * k / samples);
    if (v < best_val) best_val = v, best = k;
  }
  // golden-section refinement around the best sample
  double a = 0.5 * pi * std::max(0, best - 1) / samples;
  double b = 0.5 * pi * std::min(samples, best + 1) / samples;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - phi * (b - a), f1 = dist(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + phi * (b - a), f2 = dist(x2);
    }
  }
  return std::min({best_val, f1, f2});
}

}  // namespace

double boundary_distance(const Domain& domain, const Point& z) {
  const double r1 = std::abs(z[0]), r2 = std::abs(z[1]);
  constexpr double slack = 1e-12;
  double dist = 0.0;
  switch (domain.kind()) {
    case DomainKind::unit_disc:
    case DomainKind::disc: dist = domain.radius() - r1; break;
    case DomainKind::bidisc: dist = std::min(1.0 - r1, 1.0 - r2); break;
    case DomainKind::ball2: dist = 1.0 - std::hypot(r1, r2); break;
    case DomainKind::reinhardt_radial: {
      const auto& g = *domain.profile();
      const bool outside = r1 > g.support() * (1 + slack) || r2 > g(r1) + slack;
      if (outside) throw InvalidInput("point " + format_point(z, 2) + " lies outside the closure of the domain");
      if (!domain.contains(z)) return 0.0;
      return shadow_distance(domain, r1, r2);
    }
  }
  if (dist < -slack) throw InvalidInput("point " + format_point(z, domain.dimension()) + " lies outside the closure");
  return std::max(0.0, dist);
}

}  // namespace pberg
