#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "pberg/extremal.hpp"

using namespace pberg;

namespace {

Domain dom(const std::string& s) { return make_domain(parse_descriptor(s)); }

SpacePtr disc_space(int degree = 24) {
  static std::map<int, SpacePtr> cache;
  auto& s = cache[degree];
  if (!s) s = make_space(dom("unit_disc"), degree);
  return s;
}

SpacePtr bidisc_space() {
  static SpacePtr s = make_space(dom("bidisc"), 8);
  return s;
}

}  // namespace

TEST_CASE("disc kernel matches the closed form for every p") {
  for (double p : {1.05, 1.5, 2.0, 3.0, 4.0})
    for (double r : {0.0, 0.3, 0.5}) {
      const cplx z = std::polar(r, 0.7);
      const ExtremalSolution s = solve_min(disc_space(), p, {z, 0.0});
      CHECK(s.K_p_z == doctest::Approx(oracle::disc_K(z)).epsilon(1e-6));
      CHECK(std::abs(s.minimizer({z, 0.0}) - 1.0) < 1e-10);
      for (cplx w : {cplx(0.0), cplx(0.4, -0.2), cplx(-0.6, 0.1)})
        CHECK(std::abs(s.minimizer({w, 0.0}) - oracle::disc_m(p, w, z)) < 1e-5);
    }
}

TEST_CASE("p = 1 is reached by continuation") {
  const ExtremalSolution s = solve_min(disc_space(), 1.0, {0.4, 0.0});
  CHECK(s.K_p_z == doctest::Approx(oracle::disc_K(0.4)).epsilon(1e-4));
}

TEST_CASE("bidisc kernel is the product of disc kernels") {
  for (double p : {1.5, 2.0, 3.0}) {
    const Point z{0.3, cplx(0.0, -0.2)};
    const ExtremalSolution s = solve_min(bidisc_space(), p, z);
    CHECK(s.K_p_z == doctest::Approx(oracle::bidisc_K(z[0], z[1])).epsilon(1e-5));
    const Point w{cplx(-0.2, 0.1), 0.3};
    CHECK(std::abs(s.minimizer(w) - oracle::bidisc_m(p, w[0], w[1], z[0], z[1])) < 1e-4);
  }
}

TEST_CASE("ball kernel does not depend on p") {
  const SpacePtr s = make_space(dom("ball2"), 10);
  const Point z{0.3, 0.2};
  const double k2 = oracle::ball_K2(z[0], z[1], z[0], z[1]).real();
  CHECK(solve_min(s, 2.0, z).K_p_z == doctest::Approx(k2).epsilon(1e-6));
  CHECK(solve_min(s, 3.0, z).K_p_z == doctest::Approx(k2).epsilon(1e-5));
}

TEST_CASE("property: the minimizer beats feasible perturbations") {
  oracle::Rng rng(21);
  const SpacePtr space = disc_space(16);
  for (double p : {1.3, 2.0, 3.5}) {
    const Point z{cplx(0.2, 0.3), 0.0};
    const ExtremalSolution s = solve_min(space, p, z);
    const Eigen::RowVectorXcd c = space->row(z);
    const double base = space->lp_power(s.coefficients, p);
    for (int k = 0; k < 40; ++k) {
      Eigen::VectorXcd v(space->size());
      for (auto& x : v) x = rng.complex_normal();
      v -= c.adjoint() * (cplx(c * v) / c.squaredNorm());  // keep f(z) = 1
      const double t = std::pow(10.0, rng.uniform(-4.0, -1.0));
      CHECK(space->lp_power(s.coefficients + t * v / v.norm(), p) >= base * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("weighted L2 path and warm starts") {
  const SpacePtr space = disc_space();
  const Point z{0.5, 0.0};
  const ExtremalSolution a = solve_l2(space, {}, z);
  CHECK(a.K_p_z == doctest::Approx(oracle::disc_K(0.5)).epsilon(1e-10));
  const ExtremalSolution cold = solve_min(space, 3.0, z);
  const ExtremalSolution warm = solve_min(space, 3.0, {0.52, 0.0}, {}, &cold);
  CHECK(warm.K_p_z == doctest::Approx(oracle::disc_K(0.52)).epsilon(1e-6));
  CHECK(std::abs(off_diag(cold, {0.1, 0.0}) - oracle::disc_K_offdiag(3.0, 0.1, 0.5)) < 1e-5 * oracle::disc_K(0.5));
}

TEST_CASE("reproducing residual is small for random test functions") {
  oracle::Rng rng(3);
  const SpacePtr space = disc_space();
  for (double p : {1.5, 3.0}) {
    const ExtremalSolution s = solve_min(space, p, {cplx(0.1, -0.4), 0.0});
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXcd u(space->size());
      for (auto& x : u) x = rng.complex_normal();
      CHECK(reproducing_residual(s, u) < 1e-6);
    }
  }
}

TEST_CASE("derivative functional at p = 2 is the derivative kernel") {
  const SpacePtr space = disc_space(40);
  for (double r : {0.0, 0.4}) {
    const DirectionalFunctional f = derivative_functional(space, 2.0, {r, 0.0}, {1.0, 0.0});
    CHECK(f.value == doctest::Approx(std::sqrt(oracle::disc_derivative_kernel(r))).epsilon(1e-6));
  }
}

TEST_CASE("metrics on the disc at p = 2") {
  const ExtremalSolution s = solve_min(disc_space(40), 2.0, {0.3, 0.0});
  const Metrics m = metrics(s, {1.0, 0.0});
  // Bergman metric of the disc: sqrt(2) / (1 - |z|^2)
  CHECK(m.B == doctest::Approx(std::sqrt(2.0) / (1.0 - 0.09)).epsilon(1e-6));
  CHECK(m.B_hat >= m.B);
}

TEST_CASE("invalid inputs are rejected") {
  const SpacePtr space = disc_space(16);
  CHECK_THROWS_AS(solve_min(space, 0.5, {0.1, 0.0}), InvalidInput);
  CHECK_THROWS_AS(solve_min(space, 2.0, {0.9999, 0.0}), InvalidInput);
  CHECK_THROWS_AS(solve_min(space, 2.0, {1.2, 0.0}), InvalidInput);
  CHECK_THROWS_AS(make_space(dom("unit_disc"), 8, 0, 10), InvalidInput);
}
