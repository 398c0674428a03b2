#include <doctest.h>

#include "oracles.hpp"
#include "pberg/runner.hpp"

using namespace pberg;

namespace {

RunConfig kernel_config() {
  RunConfig c;
  c.domain = "unit_disc";
  c.degrees = {24};
  c.p_values = {2.0, 3.0};
  c.points = {{0.0, 0.0}, {0.5, 0.0}};
  c.checks = {"kernel_oracle"};
  return c;
}

const VerificationRecord* find(const ReportBundle& b, const std::string& check) {
  for (const auto& r : b.records)
    if (r.check == check) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("check catalog") {
  for (const char* name : {"kernel_oracle", "reproducing", "gradient_identity", "holder", "levi", "inequalities",
                           "hat_h_lemma", "weighted_identity", "p_sweep", "zero_free", "series_atlas", "p1_limit",
                           "boundary_experiment"})
    CHECK(find_check(name) != nullptr);
  CHECK(find_check("nope") == nullptr);
}

TEST_CASE("library closed forms agree with the test oracles") {
  const Domain disc = make_domain(parse_descriptor("unit_disc"));
  const Domain bi = make_domain(parse_descriptor("bidisc"));
  const Domain ball = make_domain(parse_descriptor("ball2"));
  CHECK(*closed_form_kernel(disc, {0.5, 0.0}) == doctest::Approx(oracle::disc_K(0.5)));
  CHECK(*closed_form_kernel(make_domain(parse_descriptor("disc:2")), {0.5, 0.0}) ==
        doctest::Approx(oracle::disc_K(0.5, 2.0)));
  CHECK(*closed_form_kernel(bi, {0.3, 0.2}) == doctest::Approx(oracle::bidisc_K(0.3, 0.2)));
  CHECK(*closed_form_kernel(ball, {0.3, 0.2}) == doctest::Approx(oracle::ball_K2(0.3, 0.2, 0.3, 0.2).real()));
  CHECK_FALSE(closed_form_kernel(make_domain(parse_descriptor("reinhardt:lp:1")), {0.1, 0.1}).has_value());
  const auto g = closed_form_gradient(disc, {cplx(0.3, -0.2), 0.0});
  CHECK((*g)[0] == doctest::Approx(oracle::disc_grad(cplx(0.3, -0.2))[0]));
  CHECK((*g)[1] == doctest::Approx(oracle::disc_grad(cplx(0.3, -0.2))[1]));
}

TEST_CASE("check-specific validation") {
  RunConfig c = kernel_config();
  CHECK_NOTHROW(validate(c));
  RunConfig e = c;
  e.checks = {"kernel_oracle", "bogus"};
  CHECK_THROWS_AS(validate(e), ConfigError);
  e = c;
  e.checks = {"kernel_oracle", "kernel_oracle"};
  CHECK_THROWS_AS(validate(e), ConfigError);
  e = c;
  e.checks = {"levi"};
  e.p_values = {3.0};
  CHECK_THROWS_AS(validate(e), ConfigError);
  e = c;
  e.checks = {"boundary_experiment"};
  CHECK_THROWS_AS(validate(e), ConfigError);
  e = c;
  e.points = {{0.995, 0.0}};  // too close to resolve at this degree
  CHECK_THROWS_AS(validate(e), ConfigError);
  e = c;
  e.checks = {"hat_h_lemma"};
  e.points = {{0.1, 0.0}};
  CHECK_THROWS_AS(validate(e), ConfigError);
}

TEST_CASE("run: kernel values, exit code and determinism") {
  const RunOutcome a = run(kernel_config());
  CHECK(a.exit_code == 0);
  CHECK(a.bundle.count(Status::pass) == 4);
  const RunOutcome b = run(kernel_config());
  CHECK(summary_json(a.bundle).dump() == summary_json(b.bundle).dump());
  RunConfig w = kernel_config();
  w.workers = 3;
  CHECK(summary_json(run(w).bundle).dump() == summary_json(a.bundle).dump());

  RunConfig strict = kernel_config();
  strict.tolerances["kernel_oracle"] = 1e-30;
  strict.degrees = {4};
  strict.points = {{0.5, 0.0}};
  const RunOutcome f = run(strict);
  CHECK(f.exit_code == 1);
}

TEST_CASE("boundary margin skips points with a reason") {
  RunConfig c = kernel_config();
  c.boundary_margin = 0.55;
  const RunOutcome r = run(c);
  CHECK(r.bundle.count(Status::skip) == 1);
  const VerificationRecord* s = find(r.bundle, "kernel_oracle");
  REQUIRE(s != nullptr);
  CHECK(s->reason == "point inside the boundary margin");
}

TEST_CASE("sweep rows and tolerances") {
  RunConfig c;
  c.domain = "unit_disc";
  c.degrees = {48};
  c.p_values = {2.0, 4.0};
  c.grid = "radial:11:0.8";
  c.boundary_margin = 0.25;
  c.checks = {"kernel_oracle"};
  const RunOutcome r = sweep(c);
  CHECK(r.exit_code == 0);
  REQUIRE(r.bundle.tables.size() == 1);
  const Table& t = r.bundle.tables[0];
  CHECK(t.rows.size() == 22);
  std::size_t skipped = 0;
  for (const auto& row : t.rows) skipped += std::get<std::string>(row[2]) == "skipped";
  CHECK(skipped == 2);
  for (const auto& rec : r.bundle.records) CHECK(rec.status == Status::pass);
}

TEST_CASE("suites are well formed") {
  for (const auto& s : suite_names())
    for (const RunConfig& c : suite_configs(s)) CHECK_NOTHROW(validate(c));
  CHECK_THROWS_AS(suite_configs("nope"), ConfigError);
}
