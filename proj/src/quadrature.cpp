#include "pberg/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <numeric>

namespace pberg {

using std::numbers::pi;

GaussLegendre gauss_legendre(int count) {
  if (count < 1) throw InvalidInput("Gauss-Legendre rule needs at least one node");
  GaussLegendre gl;
  gl.nodes.resize(count);
  gl.weights.resize(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[count - 1 - i] = x;
    gl.weights[i] = gl.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) gl.nodes[count / 2] = 0.0;
  return gl;
}

double QuadratureRule::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

namespace {

void push_ring(QuadratureRule& q, double r1, double r2, double w) { q.rings.push_back({r1, r2, w}); }

void expand_nodes(QuadratureRule& q) {
  const int M = q.angular;
  const std::size_t per = q.nodes_per_ring();
  q.nodes.resize(q.rings.size() * per);
  q.weights.resize(q.rings.size() * per);
  std::vector<cplx> phase(M);
  for (int j = 0; j < M; ++j) phase[j] = std::polar(1.0, 2.0 * pi * j / M);
  for (std::size_t k = 0; k < q.rings.size(); ++k) {
    const auto& ring = q.rings[k];
    const std::size_t base = k * per;
    if (q.dimension == 1) {
      for (int j = 0; j < M; ++j) {
        q.nodes[base + j] = {ring.r1 * phase[j], 0.0};
        q.weights[base + j] = ring.weight;
      }
    } else {
      for (int j2 = 0; j2 < M; ++j2)
        for (int j1 = 0; j1 < M; ++j1) {
          q.nodes[base + j1 + std::size_t(M) * j2] = {ring.r1 * phase[j1], ring.r2 * phase[j2]};
          q.weights[base + j1 + std::size_t(M) * j2] = ring.weight;
        }
    }
  }
}

}  // namespace

QuadratureRule quadrature(const Domain& domain, int order, int angular) {
  if (order < 4) throw InvalidInput("quadrature order must be >= 4");
  if (angular == 0) angular = 4 * order + 2;
  if (angular < 1) throw InvalidInput("angular count must be positive");

  QuadratureRule q;
  q.dimension = domain.dimension();
  q.order = order;
  q.angular = angular;
  const GaussLegendre gl = gauss_legendre(order + 1);
  const int m = order + 1;
  const double dtheta = 2.0 * pi / angular;

  switch (domain.kind()) {
    case DomainKind::unit_disc:
    case DomainKind::disc: {
      const double R = domain.radius();
      for (int i = 0; i < m; ++i) {
        const double r = R * (gl.nodes[i] + 1.0) / 2.0;
        push_ring(q, r, 0.0, gl.weights[i] * (R / 2.0) * r * dtheta);
      }
      break;
    }
    case DomainKind::bidisc: {
      for (int i2 = 0; i2 < m; ++i2)
        for (int i1 = 0; i1 < m; ++i1) {
          const double r1 = (gl.nodes[i1] + 1.0) / 2.0, r2 = (gl.nodes[i2] + 1.0) / 2.0;
          const double w1 = gl.weights[i1] / 2.0 * r1 * dtheta, w2 = gl.weights[i2] / 2.0 * r2 * dtheta;
          push_ring(q, r1, r2, w1 * w2);
        }
      break;
    }
    case DomainKind::ball2: {
      // s_i = r_i^2, s1 = t (1 - u), s2 = t u; dV = t/4 dt du dtheta1 dtheta2
      for (int iu = 0; iu < m; ++iu)
        for (int it = 0; it < m; ++it) {
          const double t = (gl.nodes[it] + 1.0) / 2.0, u = (gl.nodes[iu] + 1.0) / 2.0;
          const double w = gl.weights[it] / 2.0 * gl.weights[iu] / 2.0 * t / 4.0 * dtheta * dtheta;
          push_ring(q, std::sqrt(t * (1.0 - u)), std::sqrt(t * u), w);
        }
      break;
    }
    case DomainKind::reinhardt_radial: {
      const RadialProfile& g = *domain.profile();
      const double R1 = g.support();
      // lp profiles with t other than 1, 2 have g^2 ~ (R1 - r1)^{2/t}; r1 = R1 (1 - s^t) removes the endpoint branch
      const double k = g.analytic() && g.exponent() != 1.0 && g.exponent() != 2.0 ? g.exponent() : 1.0;
      for (int iv = 0; iv < m; ++iv)
        for (int i1 = 0; i1 < m; ++i1) {
          const double s = (gl.nodes[i1] + 1.0) / 2.0;
          const double r1 = k == 1.0 ? R1 * s : R1 * (1.0 - std::pow(s, k));
          const double jac = k == 1.0 ? R1 : R1 * k * std::pow(s, k - 1.0);
          const double v = (gl.nodes[iv] + 1.0) / 2.0;
          const double gr = g(r1);
          const double w = gl.weights[i1] / 2.0 * jac * r1 * gl.weights[iv] / 2.0 * gr * gr * v * dtheta * dtheta;
          push_ring(q, r1, gr * v, w);
        }
      break;
    }
  }

  expand_nodes(q);

  double mesh = std::numeric_limits<double>::infinity();
  for (const auto& ring : q.rings) {
    const Point x{ring.r1, ring.r2};
    if (!domain.contains(x)) throw InvalidInput("quadrature node outside the domain");
    mesh = std::min(mesh, boundary_distance(domain, x));
  }
  q.boundary_mesh = mesh;
  return q;
}

void require_compatible(const QuadratureRule& rule, int degree) {
  if (rule.angular < 4 * degree + 2)
    throw InvalidInput("angular count " + std::to_string(rule.angular) + " too small for degree " +
                       std::to_string(degree) + " (need >= " + std::to_string(4 * degree + 2) + ")");
}

}  // namespace pberg
