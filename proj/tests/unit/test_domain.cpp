#include <doctest.h>

#include "oracles.hpp"
#include "pberg/domain.hpp"

using namespace pberg;

namespace {
Domain dom(const std::string& s) { return make_domain(parse_descriptor(s)); }
}  // namespace

TEST_CASE("descriptors parse into the expected model domains") {
  CHECK(dom("unit_disc").dimension() == 1);
  CHECK(dom("disc:2.5").radius() == doctest::Approx(2.5));
  CHECK(dom("bidisc").dimension() == 2);
  CHECK(dom("ball2").kind() == DomainKind::ball2);
  const Domain l1 = dom("reinhardt:lp:1");
  REQUIRE(l1.profile() != nullptr);
  CHECK(l1.profile()->exponent() == doctest::Approx(1.0));
  CHECK_THROWS_AS(dom("annulus"), InvalidInput);
  CHECK_THROWS_AS(dom("disc:abc"), InvalidInput);
  CHECK_THROWS_AS(dom("disc:-1"), InvalidInput);
  CHECK_THROWS_AS(dom("reinhardt:lp:0.5"), InvalidInput);
}

TEST_CASE("volumes match the closed forms") {
  CHECK(dom("unit_disc").volume() == doctest::Approx(oracle::pi));
  CHECK(dom("disc:2").volume() == doctest::Approx(4.0 * oracle::pi));
  CHECK(dom("bidisc").volume() == doctest::Approx(oracle::pi * oracle::pi));
  CHECK(dom("ball2").volume() == doctest::Approx(oracle::pi * oracle::pi / 2.0));
  CHECK(dom("reinhardt:ball2").volume() == doctest::Approx(oracle::pi * oracle::pi / 2.0).epsilon(1e-9));
  // {|z1| + |z2| < 1}
  CHECK(dom("reinhardt:lp:1").volume() == doctest::Approx(oracle::pi * oracle::pi / 6.0).epsilon(1e-9));
}

TEST_CASE("membership and boundary distance") {
  const Domain disc = dom("unit_disc");
  CHECK(disc.contains({cplx(0.3, 0.4), 0.0}));
  CHECK_FALSE(disc.contains({1.0, 0.0}));
  CHECK_FALSE(disc.contains({0.1, 0.1}));  // second coordinate unused on the plane
  CHECK(boundary_distance(disc, {cplx(0.3, 0.4), 0.0}) == doctest::Approx(0.5));

  const Domain bi = dom("bidisc");
  CHECK(boundary_distance(bi, {0.5, cplx(0.0, 0.8)}) == doctest::Approx(0.2));
  const Domain ball = dom("ball2");
  CHECK(boundary_distance(ball, {0.6, 0.0}) == doctest::Approx(0.4));
  CHECK(boundary_distance(ball, {0.3, 0.4}) == doctest::Approx(0.5));
}

TEST_CASE("property: boundary distance is positive inside and 1-Lipschitz") {
  oracle::Rng rng(11);
  for (const char* name : {"unit_disc", "bidisc", "ball2", "reinhardt:lp:1", "reinhardt:lp:4"}) {
    const Domain d = dom(name);
    for (int k = 0; k < 300; ++k) {
      Point z{rng.in_disc(1.0), d.dimension() == 2 ? rng.in_disc(1.0) : cplx(0.0)};
      if (!d.contains(z)) continue;
      const double dz = boundary_distance(d, z);
      CHECK(dz > 0.0);
      const Point w = z + Point{rng.in_disc(0.01), d.dimension() == 2 ? rng.in_disc(0.01) : cplx(0.0)};
      if (d.contains(w)) CHECK(std::abs(boundary_distance(d, w) - dz) <= distance(z, w) * (1.0 + 1e-6) + 1e-12);
    }
  }
}

TEST_CASE("radial profiles") {
  const RadialProfile ball = RadialProfile::lp(2.0);
  CHECK(ball(0.6) == doctest::Approx(0.8));
  CHECK(ball.derivative(0.6) == doctest::Approx(-0.75));
  CHECK(ball.fiber_radius(0.8) == doctest::Approx(0.6));

  std::vector<double> r{0.0, 0.25, 0.5, 0.75, 1.0}, g;
  for (double x : r) g.push_back(1.0 - x * x * 0.5);
  const RadialProfile tab = RadialProfile::tabulated(r, g);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(tab(r[i]) == doctest::Approx(g[i]));
  for (double x = 0.0; x < 1.0; x += 0.01) CHECK(tab.derivative(x) <= 1e-12);
  CHECK_THROWS_AS(RadialProfile::tabulated({0.0, 0.5, 0.7, 1.0}, {1.0, 1.2, 0.5, 0.1}), InvalidInput);
  CHECK_THROWS_AS(RadialProfile::tabulated({0.0, 1.0}, {1.0, 0.5}), InvalidInput);
}
