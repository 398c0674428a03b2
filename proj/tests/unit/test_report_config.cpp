#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "oracles.hpp"
#include "pberg/config.hpp"
#include "pberg/parallel.hpp"
#include "pberg/report.hpp"

using namespace pberg;

TEST_CASE("complex number syntax") {
  CHECK(parse_complex("0.5") == cplx(0.5, 0.0));
  CHECK(parse_complex("0.3-0.2i") == cplx(0.3, -0.2));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK(parse_complex("i") == cplx(0.0, 1.0));
  CHECK(parse_complex("2e-3+1e-2i") == cplx(2e-3, 1e-2));
  CHECK(parse_complex(" 0.5 + 0i ") == cplx(0.5, 0.0));
  CHECK(parse_complex("1e-3i") == cplx(0.0, 1e-3));
  CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
  CHECK_THROWS_AS(parse_complex(""), ConfigError);
  CHECK_THROWS_AS(parse_complex("0.5x"), ConfigError);
}

TEST_CASE("points and grids") {
  const Point p = parse_point("0.3,0.2i", 2);
  CHECK(p[0] == cplx(0.3, 0.0));
  CHECK(p[1] == cplx(0.0, 0.2));
  CHECK_THROWS_AS(parse_point("0.3", 2), ConfigError);
  const Domain disc = make_domain(parse_descriptor("unit_disc"));
  const auto g = grid_points("radial:11:0.9", disc);
  REQUIRE(g.size() == 11);
  CHECK(g.back()[0].real() == doctest::Approx(0.9));
  CHECK(grid_points("polar:3:8:0.6", disc).size() == 24);
  CHECK_THROWS_AS(grid_points("radial:0:0.5", disc), ConfigError);
  CHECK_THROWS_AS(grid_points("hex:3", disc), ConfigError);
}

TEST_CASE("configuration files") {
  const Json j = Json::parse(R"({"domain": "bidisc", "degree": [8, 10], "p": [1.5, 3],
      "points": ["0.3,0.2", "0,-0.1i"], "checks": ["kernel_oracle"], "tolerances": {"kernel_oracle": 1e-3},
      "seed": 7})");
  const RunConfig c = config_from_json(j);
  CHECK(c.domain == "bidisc");
  CHECK(c.degree() == 10);
  CHECK(c.p_values == std::vector<double>{1.5, 3.0});
  CHECK(c.points.size() == 2);
  CHECK(c.tolerance("kernel_oracle", 1.0) == 1e-3);
  CHECK(c.tolerance("levi", 0.5) == 0.5);
  CHECK(c.seed == 7);
  CHECK_NOTHROW(validate_fields(c));
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"domian": "bidisc"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"p": "two"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse("[1, 2]")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("generic validation") {
  RunConfig c;
  c.checks = {"kernel_oracle"};
  CHECK_NOTHROW(validate_fields(c));
  RunConfig e = c;
  e.checks.clear();
  CHECK_THROWS_AS(validate_fields(e), ConfigError);
  e = c;
  e.p_values = {0.5};
  CHECK_THROWS_AS(validate_fields(e), ConfigError);
  e = c;
  e.points = {{1.5, 0.0}};
  CHECK_THROWS_AS(validate_fields(e), ConfigError);
  e = c;
  e.tolerances["levi"] = -1.0;
  CHECK_THROWS_AS(validate_fields(e), ConfigError);
  e = c;
  e.domain = "torus";
  CHECK_THROWS_AS(validate_fields(e), ConfigError);
}

TEST_CASE("CSV formatting follows RFC 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_complex(cplx(1.0, -2.0)) == "1-2i");
  CHECK(format_complex(cplx(0.5, 0.0)) == "0.5+0i");
  CHECK(format_double(0.1) == "0.10000000000000001");
  Table t;
  t.name = "t";
  t.columns = {"x", "z", "note"};
  t.add({1.5, cplx(0.0, 1.0), std::string("a,b")});
  t.add({(long long)3, cplx(-1.0, 0.5), std::string("")});
  CHECK(to_csv(t) == "x,z,note\r\n1.5,0+1i,\"a,b\"\r\n3,-1+0.5i,\r\n");
  CHECK_THROWS_AS(t.add({1.0}), InvalidInput);
}

TEST_CASE("property: status is pass exactly when margin >= -tolerance") {
  oracle::Rng rng(12);
  for (int k = 0; k < 500; ++k) {
    const double m = rng.uniform(-1.0, 1.0), tol = rng.uniform(0.0, 0.5);
    const VerificationRecord r = make_record("x", "anchor", Json::object(), Json::object(), m, tol);
    CHECK((r.status == Status::pass) == (m >= -tol));
  }
  const VerificationRecord s = make_skip("x", "anchor", Json::object(), "reason");
  CHECK(s.status == Status::skip);
  CHECK(s.reason == "reason");
}

TEST_CASE("digests and JSON encoding") {
  const Json a{{"p", 2.0}, {"z", "0.5"}}, b{{"p", 2.0}, {"z", "0.6"}};
  CHECK(digest(a) == digest(a));
  CHECK(digest(a) != digest(b));
  CHECK(digest(a).size() == 16);
  const Json z = to_json(cplx(0.25, -1.0));
  CHECK(z["re"] == 0.25);
  CHECK(z["im"] == -1.0);
  VerificationRecord r = make_record("x", "anchor", Json::object(), Json::object(),
                                     -std::numeric_limits<double>::infinity(), 0.0);
  CHECK(to_json(r)["margin"] == "-inf");
  CHECK(to_json(r)["status"] == "fail");
}

TEST_CASE("bundles are written and parse back") {
  ReportBundle b;
  b.title = "t";
  b.records.push_back(make_record("a", "anchor", {{"p", 2}}, {{"v", 1.0}}, 0.0, 0.1));
  b.records.push_back(make_skip("b", "anchor", Json::object(), "why"));
  Table t;
  t.name = "table";
  t.columns = {"x"};
  t.add({1.0});
  b.tables.push_back(t);
  const auto dir = std::filesystem::temp_directory_path() / "pberg_bundle_test";
  std::filesystem::remove_all(dir);
  write_bundle(b, dir);
  std::ifstream f(dir / "summary.json");
  const Json j = Json::parse(f);
  CHECK(j["schema_version"] == report_schema_version);
  CHECK(j["counts"]["pass"] == 1);
  CHECK(j["counts"]["skip"] == 1);
  CHECK(std::filesystem::exists(dir / "table.csv"));
  CHECK(std::filesystem::exists(dir / "digest.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("parallel map keeps input order and reports the first failure") {
  const auto sq = parallel_map(100, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == i * i);
  try {
    parallel_map(50, 3, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error("at " + std::to_string(i));
      return i;
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "at 7");
  }
}
