#include <doctest.h>

#include "oracles.hpp"
#include "pberg/inequality.hpp"

using namespace pberg;

namespace {

// Moduli spread over six decades, phases uniform, with some near-equal pairs.
std::pair<cplx, cplx> draw(oracle::Rng& rng) {
  const cplx a = std::polar(std::pow(10.0, rng.uniform(-3.0, 3.0)), rng.uniform(0.0, 2.0 * oracle::pi));
  if (rng.uniform() < 0.2) return {a, a * (1.0 + cplx(rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3)))};
  if (rng.uniform() < 0.1) return {a, 0.0};
  return {a, std::polar(std::pow(10.0, rng.uniform(-3.0, 3.0)), rng.uniform(0.0, 2.0 * oracle::pi))};
}

}  // namespace

TEST_CASE("names round-trip") {
  for (InequalityId id : all_inequalities) CHECK(parse_inequality(to_string(id)) == id);
  CHECK_THROWS_AS(parse_inequality("nonsense"), InvalidInput);
}

TEST_CASE("property: every inequality holds on its q range") {
  oracle::Rng rng(101);
  for (InequalityId id : all_inequalities)
    for (double q : default_q_grid()) {
      if (!in_range(id, q)) continue;
      double worst = 1.0;
      for (int k = 0; k < 4000; ++k) {
        const auto [a, b] = draw(rng);
        const InequalityCase c = check_inequality(id, a, b, q);
        CHECK(std::isfinite(c.margin));
        worst = std::min(worst, c.margin / c.scale);
      }
      INFO(to_string(id) << " q=" << q);
      CHECK(worst >= -1e-12);
    }
}

TEST_CASE("equal arguments leave every inequality satisfied") {
  for (InequalityId id : all_inequalities)
    for (double q : default_q_grid())
      if (in_range(id, q)) CHECK(check_inequality(id, cplx(0.3, 0.4), cplx(0.3, 0.4), q).margin >= -1e-14);
}

TEST_CASE("the q = 1 constant 27/8 is sharp") {
  const SweepResult ok = sweep_inequality(InequalityId::lower_q1, 1.0, 20000, 7, B1_exact);
  CHECK(ok.violations == 0);
  const SweepResult too_big = sweep_inequality(InequalityId::lower_q1, 1.0, 20000, 7, 1.01 * B1_exact);
  CHECK(too_big.violations > 0);
  const B1Estimate est = estimate_B1(20000, 3);
  CHECK(est.value == doctest::Approx(B1_exact).epsilon(1e-6));
  CHECK(est.value >= B1_exact * (1.0 - 1e-9));
}

TEST_CASE("second-order expansion of |b|^q") {
  oracle::Rng rng(17);
  for (double q : {2.5, 3.0, 4.0}) {
    for (int k = 0; k < 2000; ++k) {
      const auto [a, b] = draw(rng);
      const ExpansionReport r = expand_q(a, b, q);
      const cplx d = b - a;
      const double first = q * std::pow(std::abs(a), q - 2.0) * (std::conj(a) * d).real();
      CHECK(std::abs(r.terms[1] - first) <= 1e-12 * r.scale);
      CHECK(r.terms[0] == doctest::Approx(std::pow(std::abs(a), q)));
      CHECK(r.identity_error <= 1e-10);
      CHECK(std::abs(r.remainder_integral) <= r.bound + 1e-12 * r.scale);
    }
  }
  CHECK_THROWS_AS(expand_q(1.0, 2.0, 2.0), InvalidInput);
}

TEST_CASE("randomized sweeps are deterministic under a seed") {
  const SweepResult a = sweep_inequality(InequalityId::p_leq2, 1.5, 5000, 42, B1_exact);
  const SweepResult b = sweep_inequality(InequalityId::p_leq2, 1.5, 5000, 42, B1_exact);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_a == b.worst_a);
  const ExpansionSweep e = sweep_expansion(3.0, 5000, 1);
  CHECK(e.envelope_violations == 0);
  CHECK(e.max_ratio <= 1.0 + 1e-9);
}
