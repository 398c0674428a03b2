#include <doctest.h>

#include "oracles.hpp"
#include "pberg/extremal.hpp"

using namespace pberg;

namespace {

Domain dom(const std::string& s) { return make_domain(parse_descriptor(s)); }

double quad_moment(const QuadratureRule& q, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    s += q.weights[i] * std::norm(std::pow(q.nodes[i][0], a)) * std::norm(std::pow(q.nodes[i][1], b));
  return s;
}

// Dense node-evaluation matrix in the scaled basis, built point by point.
Eigen::MatrixXcd dense(const LpSpace& s) {
  Eigen::MatrixXcd A(s.rule().size(), s.size());
  for (std::size_t i = 0; i < s.rule().size(); ++i) A.row(i) = s.row(s.rule().nodes[i]);
  return A;
}

Eigen::VectorXcd random_vector(oracle::Rng& rng, std::size_t n) {
  Eigen::VectorXcd v(n);
  for (auto& x : v) x = rng.complex_normal();
  return v;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  const GaussLegendre gl = gauss_legendre(7);
  double w = 0.0, x12 = 0.0, x13 = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    w += gl.weights[i];
    x12 += gl.weights[i] * std::pow(gl.nodes[i], 12);
    x13 += gl.weights[i] * std::pow(gl.nodes[i], 13);
  }
  CHECK(w == doctest::Approx(2.0));
  CHECK(x12 == doctest::Approx(2.0 / 13.0));
  CHECK(std::abs(x13) < 1e-14);
}

TEST_CASE("quadrature total weight is the volume") {
  for (const char* name : {"unit_disc", "disc:1.5", "bidisc", "ball2", "reinhardt:lp:1", "reinhardt:lp:3"}) {
    const Domain d = dom(name);
    CHECK(quadrature(d, 12).total_weight() == doctest::Approx(d.volume()).epsilon(1e-8));
  }
}

TEST_CASE("monomial moments against closed forms") {
  const QuadratureRule disc = quadrature(dom("unit_disc"), 24);
  const QuadratureRule bi = quadrature(dom("bidisc"), 12);
  const QuadratureRule ball = quadrature(dom("ball2"), 12);
  for (int k = 0; k <= 20; ++k) {
    CHECK(quad_moment(disc, k, 0) == doctest::Approx(oracle::disc_moment(k)).epsilon(1e-12));
    CHECK(exact_moment(dom("unit_disc"), {k, 0}) == doctest::Approx(oracle::disc_moment(k)).epsilon(1e-12));
    CHECK(exact_moment(dom("disc:2"), {k, 0}) == doctest::Approx(oracle::disc_moment(k, 2.0)).epsilon(1e-12));
  }
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b) {
      CHECK(quad_moment(bi, a, b) == doctest::Approx(oracle::bidisc_moment(a, b)).epsilon(1e-11));
      CHECK(quad_moment(ball, a, b) == doctest::Approx(oracle::ball_moment(a, b)).epsilon(1e-11));
      CHECK(exact_moment(dom("ball2"), {a, b}) == doctest::Approx(oracle::ball_moment(a, b)).epsilon(1e-11));
      CHECK(exact_moment(dom("reinhardt:ball2"), {a, b}) == doctest::Approx(oracle::ball_moment(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("angular resolution is enforced") {
  const QuadratureRule q = quadrature(dom("unit_disc"), 8, 20);
  CHECK_THROWS_AS(require_compatible(q, 8), InvalidInput);
  CHECK_NOTHROW(require_compatible(q, 4));
  CHECK_THROWS_AS(quadrature(dom("unit_disc"), 2), InvalidInput);
}

TEST_CASE("ring operator matches the dense evaluation matrix") {
  oracle::Rng rng(5);
  for (const char* name : {"unit_disc", "bidisc", "reinhardt:lp:1"}) {
    const Domain d = dom(name);
    const int degree = d.dimension() == 1 ? 9 : 4;
    const LpSpace s(d, degree);
    const Eigen::MatrixXcd A = dense(s);
    const Eigen::VectorXcd u = random_vector(rng, s.size());
    const Eigen::VectorXcd h = random_vector(rng, s.rule().size());
    Eigen::VectorXd w(s.rule().size()), dv(s.rule().size());
    for (std::size_t i = 0; i < s.rule().size(); ++i) {
      w[i] = s.rule().weights[i];
      dv[i] = rng.uniform(0.5, 2.0);
    }
    const Eigen::VectorXcd e = random_vector(rng, s.rule().size());

    CHECK((s.op().synthesize(u) - A * u).norm() <= 1e-12 * (A * u).norm());
    const Eigen::VectorXcd ah = A.adjoint() * w.asDiagonal() * h;
    CHECK((s.op().analyze(h) - ah).norm() <= 1e-12 * ah.norm());
    const Eigen::MatrixXcd G = A.adjoint() * (w.array() * dv.array()).matrix().asDiagonal() * A;
    CHECK((s.op().weighted_gram(dv) - G).norm() <= 1e-12 * G.norm());
    Eigen::MatrixXcd P, Q;
    s.op().hessian_blocks(dv, e, P, Q);
    const Eigen::VectorXcd we = w.cast<cplx>().cwiseProduct(e);
    const Eigen::MatrixXcd Qd = A.transpose() * we.asDiagonal() * A;
    CHECK((P - G).norm() <= 1e-12 * G.norm());
    CHECK((Q - Qd).norm() <= 1e-11 * Qd.norm());
  }
}

TEST_CASE("scaled monomials are orthonormal for the quadrature") {
  for (const char* name : {"unit_disc", "bidisc", "ball2"}) {
    const LpSpace s(dom(name), 6);
    const Eigen::MatrixXcd G = s.op().weighted_gram(Eigen::VectorXd::Ones(s.op().nodes()));
    CHECK((G - Eigen::MatrixXcd::Identity(s.size(), s.size())).norm() < 1e-11);
    CHECK(s.condition() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.raw_condition() > 1.0);
  }
}

TEST_CASE("derivative rows agree with difference quotients") {
  const LpSpace s(dom("bidisc"), 5);
  oracle::Rng rng(9);
  const Eigen::VectorXcd u = random_vector(rng, s.size());
  const Point z{cplx(0.2, 0.1), cplx(-0.3, 0.2)}, X{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  const double h = 1e-5;
  const cplx d1 = (s.evaluate(u, z + h * X) - s.evaluate(u, z - h * X)) / (2.0 * h);
  const cplx d2 = (s.evaluate(u, z + h * X) - 2.0 * s.evaluate(u, z) + s.evaluate(u, z - h * X)) / (h * h);
  CHECK(std::abs(cplx(s.derivative_row(z, X) * u) - d1) < 1e-7 * std::abs(d1));
  CHECK(std::abs(cplx(s.second_row(z, X) * u) - d2) < 1e-4 * std::abs(d2));
}
