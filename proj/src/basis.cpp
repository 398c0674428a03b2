#include "pberg/basis.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace pberg {

using std::numbers::pi;

Basis monomial_basis(const Domain& domain, int degree) {
  if (degree < 0) throw InvalidInput("basis degree must be >= 0");
  Basis b;
  b.dimension = domain.dimension();
  b.degree = degree;
  for (int d = 0; d <= degree; ++d) {
    if (b.dimension == 1) {
      b.indices.push_back({d, 0});
    } else {
      for (int a2 = 0; a2 <= d; ++a2) b.indices.push_back({d - a2, a2});
    }
  }
  b.transform = Eigen::MatrixXcd::Identity(b.size(), b.size());
  return b;
}

cplx monomial(const MultiIndex& alpha, const Point& zeta) {
  cplx v = 1.0;
  for (int k = 0; k < 2; ++k)
    if (alpha[k]) v *= std::pow(zeta[k], alpha[k]);
  return v;
}

cplx monomial_partial(const MultiIndex& alpha, const Point& zeta, int coordinate) {
  if (alpha[coordinate] == 0) return 0.0;
  MultiIndex lower = alpha;
  lower[coordinate] -= 1;
  return double(alpha[coordinate]) * monomial(lower, zeta);
}

namespace {

// Raw monomial table [points x monomials] together with derivative tables.
void monomial_tables(const Basis& basis, const std::vector<Point>& points, const std::vector<Point>& dirs, int order,
                     EvalTable& out) {
  const std::size_t N = basis.size(), P = points.size();
  const int d = basis.degree;
  out.values.resize(P, N);
  out.first.assign(order >= 1 ? dirs.size() : 0, Eigen::MatrixXcd(P, N));
  out.second.assign(order >= 2 ? dirs.size() : 0, Eigen::MatrixXcd(P, N));
  std::vector<cplx> pw0(d + 1), pw1(d + 1);
  auto power = [&](int coord, int e) -> cplx {
    if (e < 0) return 0.0;
    return coord == 0 ? pw0[e] : pw1[e];
  };
  for (std::size_t i = 0; i < P; ++i) {
    pw0[0] = pw1[0] = 1.0;
    for (int e = 1; e <= d; ++e) {
      pw0[e] = pw0[e - 1] * points[i][0];
      pw1[e] = pw1[e - 1] * points[i][1];
    }
    for (std::size_t k = 0; k < N; ++k) {
      const int a = basis.indices[k][0], b = basis.indices[k][1];
      out.values(i, k) = power(0, a) * power(1, b);
      if (order < 1) continue;
      const cplx d0 = double(a) * power(0, a - 1) * power(1, b);
      const cplx d1 = double(b) * power(0, a) * power(1, b - 1);
      const cplx d00 = double(a) * (a - 1) * power(0, a - 2) * power(1, b);
      const cplx d11 = double(b) * (b - 1) * power(0, a) * power(1, b - 2);
      const cplx d01 = double(a) * b * power(0, a - 1) * power(1, b - 1);
      for (std::size_t q = 0; q < dirs.size(); ++q) {
        const Point& X = dirs[q];
        out.first[q](i, k) = X[0] * d0 + X[1] * d1;
        if (order >= 2) out.second[q](i, k) = X[0] * X[0] * d00 + 2.0 * X[0] * X[1] * d01 + X[1] * X[1] * d11;
      }
    }
  }
}

}  // namespace

EvalTable eval(const Basis& basis, const std::vector<Point>& points, const std::vector<Point>& directions,
               int max_derivative_order) {
  if (max_derivative_order < 0 || max_derivative_order > 2)
    throw InvalidInput("derivative order must be 0, 1 or 2");
  EvalTable t;
  monomial_tables(basis, points, directions, max_derivative_order, t);
  if (basis.orthonormalized) {
    t.values = t.values * basis.transform;
    for (auto& m : t.first) m = m * basis.transform;
    for (auto& m : t.second) m = m * basis.transform;
  }
  return t;
}

Eigen::MatrixXcd gram_matrix(const Basis& basis, const QuadratureRule& rule, const std::vector<double>& weight) {
  if (weight.size() != rule.size()) throw InvalidInput("weight must have one entry per quadrature node");
  for (std::size_t i = 0; i < weight.size(); ++i) {
    if (!std::isfinite(weight[i])) throw InvalidInput("non-finite weight at node " + std::to_string(i));
    if (weight[i] < 0.0) throw InvalidInput("negative weight at node " + std::to_string(i));
  }
  const std::size_t N = basis.size();
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(N, N);
  constexpr std::size_t block = 4096;
  for (std::size_t start = 0; start < rule.size(); start += block) {
    const std::size_t len = std::min(block, rule.size() - start);
    std::vector<Point> pts(rule.nodes.begin() + start, rule.nodes.begin() + start + len);
    const EvalTable t = eval(basis, pts);
    Eigen::VectorXd w(len);
    for (std::size_t i = 0; i < len; ++i) w[i] = rule.weights[start + i] * weight[start + i];
    // G[j,k] += sum_i w_i phi_j(x_i) conj(phi_k(x_i))
    G.noalias() += t.values.transpose() * w.asDiagonal() * t.values.conjugate();
  }
  G = 0.5 * (G + G.adjoint().eval());
  if (!G.allFinite()) throw InvalidInput("Gram matrix has non-finite entries");
  return G;
}

Eigen::MatrixXcd gram_matrix(const Basis& basis, const QuadratureRule& rule) {
  return gram_matrix(basis, rule, std::vector<double>(rule.size(), 1.0));
}

Basis orthonormalize(const Basis& basis, const QuadratureRule& rule) {
  const Eigen::MatrixXcd G = gram_matrix(basis, rule);
  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success) throw IllConditioned("Gram matrix is not positive definite");
  // C = L^{-T} makes C^T G conj(C) the identity.
  const Eigen::MatrixXcd L = llt.matrixL();
  const Eigen::MatrixXcd Linv =
      L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(basis.size(), basis.size()));
  Basis out = basis;
  out.transform = basis.transform * Linv.transpose();
  out.orthonormalized = true;
  return out;
}

namespace {

double log_factorial(double n) { return std::lgamma(n + 1.0); }

double profile_moment(const RadialProfile& g, int a, int b) {
  // (2 pi)^2 int_0^R1 r1^{2a+1} g(r1)^{2b+2} / (2b+2) dr1
  auto f = [&](double r) { return std::pow(r, 2 * a + 1) * std::pow(g(r), 2 * b + 2) / (2.0 * b + 2.0); };
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

double exact_moment(const Domain& domain, const MultiIndex& alpha) {
  const int a = alpha[0], b = alpha[1];
  switch (domain.kind()) {
    case DomainKind::unit_disc:
    case DomainKind::disc: return pi * std::pow(domain.radius(), 2 * a + 2) / (a + 1.0);
    case DomainKind::bidisc: return pi * pi / ((a + 1.0) * (b + 1.0));
    case DomainKind::ball2:
      return pi * pi * std::exp(log_factorial(a) + log_factorial(b) - log_factorial(a + b + 2));
    case DomainKind::reinhardt_radial: {
      const RadialProfile& g = *domain.profile();
      if (g.analytic() && g.exponent() == 2.0)
        return pi * pi * std::exp(log_factorial(a) + log_factorial(b) - log_factorial(a + b + 2));
      if (g.analytic() && g.exponent() == 1.0)
        return 4.0 * pi * pi / (2.0 * b + 2.0) *
               std::exp(log_factorial(2 * a + 1) + log_factorial(2 * b + 2) - log_factorial(2 * a + 2 * b + 4));
      return profile_moment(g, a, b);
    }
  }
  return 0.0;
}

}  // namespace pberg
