#include "pberg/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pberg {

namespace {

struct Named {
  InequalityId id;
  const char* name;
};

constexpr Named names[] = {
    {InequalityId::p_leq2, "p_leq2"},         {InequalityId::p_geq2_half, "p_geq2_half"},
    {InequalityId::p_geq2_power, "p_geq2_power"}, {InequalityId::lower_leq2, "lower_leq2"},
    {InequalityId::lower_geq2, "lower_geq2"}, {InequalityId::lower_q1, "lower_q1"},
    {InequalityId::diff_leq2, "diff_leq2"},   {InequalityId::diff_geq2, "diff_geq2"},
    {InequalityId::geq1, "geq1"},             {InequalityId::elementary_power, "elementary_power"},
};

// |a|^{q-2} conj(a), continuous extension 0 at a = 0
cplx dual_power(cplx a, double q) {
  const double r = std::abs(a);
  if (r == 0.0) return 0.0;
  return std::pow(r, q - 2.0) * std::conj(a);
}

}  // namespace

std::string to_string(InequalityId id) {
  for (const auto& n : names)
    if (n.id == id) return n.name;
  return "unknown";
}

InequalityId parse_inequality(const std::string& name) {
  for (const auto& n : names)
    if (name == n.name) return n.id;
  throw InvalidInput("unknown inequality id '" + name + "'");
}

bool in_range(InequalityId id, double q) {
  switch (id) {
    case InequalityId::p_leq2: return q >= 1.0 && q <= 2.0;
    case InequalityId::p_geq2_half:
    case InequalityId::p_geq2_power: return q > 2.0;
    case InequalityId::lower_leq2: return q > 1.0 && q < 2.0;
    case InequalityId::lower_geq2: return q >= 2.0;
    case InequalityId::lower_q1: return q == 1.0;
    case InequalityId::diff_leq2: return q > 1.0 && q < 2.0;
    case InequalityId::diff_geq2: return q >= 2.0;
    case InequalityId::geq1: return q > 1.0;
    case InequalityId::elementary_power: return q > 0.0;
  }
  return false;
}

InequalityCase check_inequality(InequalityId id, cplx a, cplx b, double q, double B1) {
  if (!std::isfinite(q) || !in_range(id, q))
    throw InvalidInput("q = " + std::to_string(q) + " outside the validity range of " + to_string(id));
  InequalityCase c;
  c.id = id;
  c.a = a;
  c.b = b;
  c.q = q;
  const double A = std::abs(a), B = std::abs(b), D = std::abs(b - a), S = A + B;
  c.scale = std::pow(std::max({A, B, 1.0}), q);
  const cplx pa = dual_power(a, q), pb = dual_power(b, q);
  const double monotone = ((pb - pa) * (b - a)).real();
  const double taylor1 = std::pow(A, q) + q * (pa * (b - a)).real();
  switch (id) {
    case InequalityId::p_leq2: {
      c.lhs = monotone;
      if (S == 0.0) {
        c.degenerate = true;
        break;
      }
      const double im = std::imag(a * std::conj(b));
      c.rhs = (q - 1.0) * std::pow(S, q - 2.0) * D * D + (2.0 - q) * im * im * std::pow(S, q - 4.0);
      break;
    }
    case InequalityId::p_geq2_half:
      c.lhs = monotone;
      c.rhs = 0.5 * (std::pow(A, q - 2.0) + std::pow(B, q - 2.0)) * D * D;
      break;
    case InequalityId::p_geq2_power: {
      // chain: monotone >= half-sum bound >= 2^{1-q} |b-a|^q
      const double mid = 0.5 * (std::pow(A, q - 2.0) + std::pow(B, q - 2.0)) * D * D;
      const double low = std::pow(2.0, 1.0 - q) * std::pow(D, q);
      c.lhs = monotone;
      c.rhs = low;
      c.margin = std::min(monotone - mid, mid - low);
      return c;
    }
    case InequalityId::lower_leq2:
      c.lhs = std::pow(B, q);
      if (S == 0.0) {
        c.degenerate = true;
        break;
      }
      c.rhs = taylor1 + q * (q - 1.0) / 2.0 * D * D * std::pow(S, q - 2.0);
      break;
    case InequalityId::lower_geq2:
      c.lhs = std::pow(B, q);
      c.rhs = taylor1 + std::pow(4.0, -q - 3.0) * std::pow(D, q);
      break;
    case InequalityId::lower_q1: {
      c.lhs = B;
      if (S == 0.0) {
        c.degenerate = true;
        break;
      }
      const double im = std::imag(std::conj(a) * b);
      c.rhs = A + (dual_power(a, 1.0) * (b - a)).real() + B1 * im * im / (S * S * S);
      break;
    }
    case InequalityId::diff_leq2:
      c.lhs = std::abs(pb - pa);
      c.rhs = std::pow(2.0, 2.0 - q) * std::pow(D, q - 1.0);
      c.margin = c.rhs - c.lhs;
      return c;
    case InequalityId::diff_geq2:
      c.lhs = std::abs(pb - pa);
      c.rhs = (q - 1.0) * D * std::pow(A + D, q - 2.0);
      c.margin = c.rhs - c.lhs;
      return c;
    case InequalityId::geq1: {
      // |a|^q <= |b|^q + q Re{pa (a - b)} <= |b|^q + q |a|^{q-1} |b - a|
      const double mid = std::pow(B, q) + q * (pa * (a - b)).real();
      const double top = std::pow(B, q) + q * std::pow(A, q - 1.0) * D;
      c.lhs = std::pow(A, q);
      c.rhs = top;
      c.margin = std::min(mid - c.lhs, top - mid);
      return c;
    }
    case InequalityId::elementary_power:
      c.lhs = std::pow(std::abs(a + b), q);
      c.rhs = std::max(1.0, std::pow(2.0, q - 1.0)) * (std::pow(A, q) + std::pow(B, q));
      c.margin = c.rhs - c.lhs;
      return c;
  }
  c.margin = c.degenerate ? 0.0 : c.lhs - c.rhs;
  return c;
}

// ---------------------------------------------------------------------------
// Sampling

PairSampler::PairSampler(std::uint64_t seed) : rng_(seed) {}

std::pair<cplx, cplx> PairSampler::next() {
  auto modulus = [&] { return std::pow(10.0, -3.0 + 6.0 * uniform()); };
  auto phase = [&] { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); };
  const cplx a = modulus() * phase();
  const double family = uniform();
  cplx b;
  if (family < 0.6) {
    b = modulus() * phase();
  } else if (family < 0.75) {
    // a close to b
    b = a * (1.0 + std::pow(10.0, -8.0 + 7.0 * uniform()) * phase());
  } else if (family < 0.85) {
    // a close to 0 relative to b
    b = modulus() * phase();
    return {b * std::pow(10.0, -8.0 + 6.0 * uniform()) * phase(), b};
  } else if (family < 0.95) {
    // nearly antipodal
    b = -a * std::pow(10.0, -1.0 + 2.0 * uniform()) * std::polar(1.0, 1e-3 * (uniform() - 0.5));
  } else {
    // collinear, same direction
    b = a * std::pow(10.0, -2.0 + 4.0 * uniform());
  }
  return {a, b};
}

namespace {

// Admissible constant for one pair; the numerator |b| - Re(conj(a) b)/|a|
// is evaluated as 2 |b| sin^2(theta/2) to avoid cancellation.
double b1_ratio(cplx a, cplx b) {
  const double A = std::abs(a), B = std::abs(b);
  const double im = std::imag(std::conj(a) * b);
  if (A == 0.0 || im == 0.0) return std::numeric_limits<double>::infinity();
  const double theta = std::arg(b * std::conj(a));
  const double s = std::sin(theta / 2.0);
  const double num = 2.0 * B * s * s;
  return num * std::pow(A + B, 3) / (im * im);
}

}  // namespace

B1Estimate estimate_B1(std::size_t budget, std::uint64_t seed) {
  if (budget < 10000) throw InvalidInput("B1 estimate needs a budget of at least 1e4 samples");
  PairSampler sampler(seed);
  B1Estimate est;
  est.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < budget; ++i) {
    const auto [a, b] = sampler.next();
    const double r = b1_ratio(a, b);
    if (r < est.value) {
      est.value = r;
      est.a = a;
      est.b = b;
    }
  }
  est.samples = budget;
  // compass search in (log |b/a|, arg(b/a)) from the best sample
  const cplx w = est.b / est.a;
  double x = std::log(std::abs(w)), y = std::abs(std::arg(w));
  auto f = [](double lx, double th) {
    th = std::clamp(th, 1e-9, std::numbers::pi - 1e-9);
    return b1_ratio(1.0, std::exp(lx) * std::polar(1.0, th));
  };
  double best = f(x, y), step = 0.5;
  while (step > 1e-12) {
    bool moved = false;
    for (auto [dx, dy] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      const double v = f(x + dx, y + dy);
      if (v < best) {
        best = v;
        x += dx;
        y = std::clamp(y + dy, 1e-9, std::numbers::pi - 1e-9);
        moved = true;
        break;
      }
    }
    if (!moved) step /= 2.0;
  }
  if (best < est.value) {
    est.value = best;
    est.a = 1.0;
    est.b = std::exp(x) * std::polar(1.0, y);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Expansion with remainder

ExpansionReport expand_q(cplx a, cplx b, double q) {
  if (!(q > 2.0) || !std::isfinite(q)) throw InvalidInput("expansion requires q > 2");
  ExpansionReport r;
  r.a = a;
  r.b = b;
  r.q = q;
  const cplx d = b - a;
  const double A = std::abs(a), D = std::abs(d);
  r.scale = std::pow(std::max({A, std::abs(b), 1.0}), q);
  r.terms[0] = std::pow(A, q);
  r.terms[1] = q * (dual_power(a, q) * d).real();
  r.terms[2] = q * q / 4.0 * std::pow(A, q - 2.0) * D * D;
  const cplx unit = A == 0.0 ? cplx(0.0) : std::conj(a) / A;
  r.terms[3] = q * (q - 2.0) / 4.0 * std::pow(A, q - 2.0) * (unit * unit * d * d).real();
  const double bq = std::pow(std::abs(b), q);
  r.remainder = bq - (r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3]);

  // R = int_0^1 (1 - t)(kappa''(t) - kappa''(0)) dt with kappa(t) = |a + t d|^q,
  // split where |a + t d| is smallest
  auto kappa2 = [&](double t) {
    const cplx c = a + t * d;
    const double ac = std::abs(c);
    if (ac == 0.0) return 0.0;
    const double re = (std::conj(c) * d).real();
    return q * std::pow(ac, q - 2.0) * D * D + q * (q - 2.0) * std::pow(ac, q - 4.0) * re * re;
  };
  const double k0 = kappa2(0.0);
  auto integrand = [&](double t) { return (1.0 - t) * (kappa2(t) - k0); };
  double tstar = D == 0.0 ? 0.0 : std::clamp(-(std::conj(a) * d).real() / (D * D), 0.0, 1.0);
  // t = t* +- len s^4 flattens the |t - t*|^{q-2} behaviour at the split point
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto piece = [&](double len, double sign) {
    auto g = [&](double s) {
      const double s3 = s * s * s;
      return integrand(tstar + sign * len * s3 * s) * 4.0 * len * s3;
    };
    return GK::integrate(g, 0.0, 1.0, 3, 1e-13);
  };
  double integral = 0.0;
  if (tstar > 0.0) integral += piece(tstar, -1.0);
  if (tstar < 1.0) integral += piece(1.0 - tstar, 1.0);
  r.remainder_integral = integral;
  r.identity_error =
      std::abs(r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3] + r.remainder_integral - bq) / r.scale;

  // envelopes assembled from the two branches of the proof
  double F, G;
  if (q < 4.0)
    F = q * (q - 2.0) * (std::pow(A, q / 2.0 - 1.0) + std::pow(D, q / 2.0 - 1.0)) * std::pow(D, q / 2.0 + 1.0);
  else
    F = q * (q - 2.0) * (q - 2.0) * std::pow(2.0, q - 5.0) * (std::pow(A, q - 3.0) + std::pow(D, q - 3.0)) * D * D * D;
  if (q <= 3.0) {
    G = q * q / 2.0 * std::pow(D, q);
  } else {
    const double Cq = (q - 2.0) * std::max(1.0, std::pow(2.0, q - 4.0));
    G = 0.5 * std::max(q * q * Cq, q * q * (q - 2.0)) * (std::pow(A, q - 3.0) + std::pow(D, q - 3.0)) * D * D * D;
  }
  r.bound = 0.5 * (F + G);
  return r;
}

std::vector<double> default_q_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 12; ++k) g.push_back(1.0 + 0.25 * k);
  return g;
}

SweepResult sweep_inequality(InequalityId id, double q, std::size_t samples, std::uint64_t seed, double B1,
                             double tol) {
  SweepResult res;
  res.id = id;
  res.q = q;
  res.samples = samples;
  res.worst_margin = std::numeric_limits<double>::infinity();
  PairSampler sampler(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto [a, b] = sampler.next();
    const InequalityCase c = check_inequality(id, a, b, q, B1);
    if (c.degenerate) ++res.degenerate;
    const double rel = c.margin / c.scale;
    if (rel < -tol) ++res.violations;
    if (rel < res.worst_margin) {
      res.worst_margin = rel;
      res.worst_a = a;
      res.worst_b = b;
    }
  }
  return res;
}

ExpansionSweep sweep_expansion(double q, std::size_t samples, std::uint64_t seed) {
  ExpansionSweep res;
  res.q = q;
  res.samples = samples;
  PairSampler sampler(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto [a, b] = sampler.next();
    const ExpansionReport r = expand_q(a, b, q);
    res.max_identity_error = std::max(res.max_identity_error, r.identity_error);
    if (std::abs(r.remainder_integral) > r.bound + 1e-12 * r.scale) ++res.envelope_violations;
    if (r.bound > 0.0) res.max_ratio = std::max(res.max_ratio, std::abs(r.remainder_integral) / r.bound);
  }
  return res;
}

}  // namespace pberg
