// Acceptance criteria at the stated tolerances, one line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pberg/inequality.hpp"
#include "pberg/regularity.hpp"
#include "pberg/reinhardt.hpp"
#include "pberg/weighted.hpp"

using namespace pberg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Domain dom(const std::string& s) { return make_domain(parse_descriptor(s)); }

SpacePtr disc(int degree = 32) {
  static std::map<int, SpacePtr> cache;
  auto& s = cache[degree];
  if (!s) s = make_space(dom("unit_disc"), degree);
  return s;
}

SpacePtr bidisc() {
  static SpacePtr s = make_space(dom("bidisc"), 10);
  return s;
}

Point d(cplx z) { return {z, 0.0}; }

std::vector<double> bidisc_grad(const Point& z) {
  const auto g1 = oracle::disc_grad(z[0]), g2 = oracle::disc_grad(z[1]);
  const double k1 = oracle::disc_K(z[0]), k2 = oracle::disc_K(z[1]);
  return {g1[0] * k2, g2[0] * k1, g1[1] * k2, g2[1] * k1};
}

const std::vector<Point> bidisc_points{{0.0, 0.0},
                                       {0.3, 0.2},
                                       {cplx(0.1, 0.2), -0.3},
                                       {-0.4, cplx(0.0, 0.3)},
                                       {cplx(0.2, -0.3), cplx(0.2, 0.2)},
                                       {0.5, cplx(-0.1, 0.1)}};

// ---------------------------------------------------------------------------

Outcome c1_disc_oracle() {
  double worst = 0.0, plateau = 0.0;
  for (double p : {1.05, 1.5, 2.0, 3.0, 4.0})
    for (double r : {0.0, 0.3, 0.5, 0.7}) {
      std::vector<double> K;
      for (int deg : {24, 32, 40}) K.push_back(solve_min(disc(deg), p, d(r)).K_p_z);
      worst = std::max(worst, std::abs(K.back() - oracle::disc_K(r)) / oracle::disc_K(r));
      plateau = std::max(plateau, std::abs(K[2] - K[1]) / K[2]);
    }
  return {worst <= 1e-4 && plateau <= 1e-4,
          "max rel err " + fmt("%.2e", worst) + ", degree 32 -> 40 change " + fmt("%.2e", plateau)};
}

Outcome c2_reproducing() {
  oracle::Rng rng(2024);
  double worst = 0.0;
  for (double p : {1.05, 1.5, 2.0, 3.0, 4.0})
    for (double r : {0.0, 0.3, 0.5, 0.7}) {
      const ExtremalSolution s = solve_min(disc(), p, d(r));
      for (int k = 0; k < 5; ++k) {
        Eigen::VectorXcd u(disc()->size());
        for (auto& x : u) x = rng.complex_normal() / std::sqrt(double(u.size()));
        worst = std::max(worst, reproducing_residual(s, u));
      }
    }
  return {worst <= 1e-6, "max residual " + fmt("%.2e", worst) + " over 100 test functions"};
}

Outcome c3_gradient() {
  double disc_dev = 0.0, disc_oracle = 0.0;
  for (double p : {1.5, 2.0, 3.0})
    for (cplx z : {cplx(0.0), cplx(0.3), cplx(0.5), cplx(0.7), cplx(0.2, 0.4)}) {
      const GradientCheck g = gradient_identity(disc(), p, d(z));
      disc_dev = std::max({disc_dev, g.deviation, g.deviation_half});
      const auto o = oracle::disc_grad(z);
      for (int j = 0; j < 2; ++j) disc_oracle = std::max(disc_oracle, std::abs(g.fd[j] - o[j]) / g.scale);
    }
  double p2 = 0.0, p3_dev = 0.0, p3_self = 0.0;
  for (const Point& z : bidisc_points) {
    const GradientCheck g2 = gradient_identity(bidisc(), 2.0, z);
    const std::vector<double> o = bidisc_grad(z);
    for (int j = 0; j < 4; ++j) p2 = std::max(p2, std::abs(g2.fd[j] - o[j]) / g2.scale);
    p2 = std::max(p2, g2.deviation);
    const GradientCheck g3 = gradient_identity(bidisc(), 3.0, z);
    p3_dev = std::max(p3_dev, std::max(g3.deviation, g3.deviation_half));
    p3_self = std::max(p3_self, g3.self_consistency);
  }
  const bool ok = disc_dev <= 1e-3 && disc_oracle <= 1e-3 && p2 <= 1e-3 && p3_dev <= 1e-3 && p3_self <= 1e-3;
  return {ok, "disc " + fmt("%.1e", std::max(disc_dev, disc_oracle)) + ", bidisc p=2 " + fmt("%.1e", p2) +
                  ", bidisc p=3 " + fmt("%.1e", p3_dev) + " (h vs h/2 " + fmt("%.1e", p3_self) + ")"};
}

Outcome c4_holder() {
  const Point z0{0.3, 0.2}, zeta{0.1, -0.2};
  const Point v = (1.0 / std::sqrt(1.25)) * Point{1.0, 0.5};
  Outcome out;
  for (double p : {1.5, 3.0, 4.0}) {
    const HolderSamples S = holder_samples(bidisc(), p, z0, v, zeta, 1e-3, 1e-1, 21);
    const double floor = 1e-8 * oracle::bidisc_K(0.3, 0.2);
    const double target = (p <= 2.0 ? 1.0 : p / (2.0 * p - 2.0)) - 0.1;
    for (const auto* diff : {&S.gradient_difference, &S.kernel_difference}) {
      const HolderFit f = holder_fit(S.distance, *diff, floor);
      const bool ok = f.alpha_hat >= target && f.used >= 20 && f.decades >= 2.0 - 1e-9;
      out.pass = out.pass && ok;
      out.detail += (out.detail.empty() ? "" : ", ") + std::string(diff == &S.gradient_difference ? "grad" : "kern") +
                    fmt("(p=%g) ", p) + fmt("%.3f", f.alpha_hat) + fmt(">=%.3f", target);
    }
  }
  return out;
}

Outcome c5_levi() {
  Outcome out;
  double worst = 1.0, eq = 0.0;
  std::size_t nonconv = 0;
  auto direction = [](int n, int i) {
    if (n == 1) return Point{std::polar(1.0, oracle::pi * i / 4.0), 0.0};
    const double a = 0.5 * oracle::pi * (i + 0.5) / 8.0;
    return Point{std::cos(a), std::polar(std::sin(a), 0.75 * oracle::pi * i)};
  };
  const std::vector<Point> dp{d(0.1),  d(cplx(0.3, 0.1)), d(cplx(0.0, -0.4)), d(-0.5),
                              d(cplx(0.2, -0.5)), d(cplx(0.6, 0.2)), d(cplx(-0.3, 0.3)), d(0.7)};
  const std::vector<Point> bp{{0.1, 0.0},  {0.3, 0.2},       {cplx(0.0, -0.3), 0.1}, {-0.4, cplx(0.2, 0.2)},
                              {0.2, -0.5}, {cplx(0.3, 0.3), 0.0}, {-0.1, cplx(0.0, 0.4)}, {0.5, 0.3}};
  for (const auto& [space, pts] : {std::pair{disc(), &dp}, std::pair{bidisc(), &bp}}) {
    const int n = space->domain().dimension();
    for (int i = 0; i < 8; ++i) {
      const Point z = (*pts)[i];
      const double r = 0.1 * boundary_distance(space->domain(), z);
      for (double p : {1.25, 1.5, 1.75}) {
        const LeviSample s = levi_check(space, p, z, direction(n, i), r);
        if (!s.converged) ++nonconv;
        worst = std::min(worst, s.margin / s.scale);
      }
      const LeviSample s2 = levi_check(space, 2.0, z, direction(n, i), r);
      if (!s2.converged) ++nonconv;
      eq = std::max(eq, std::abs(s2.margin) / s2.scale);
      if (n == 1) eq = std::max(eq, std::abs(s2.lhs - oracle::disc_levi_logK(z[0])) / s2.scale);
    }
  }
  out.pass = worst >= -1e-3 && eq <= 1e-3 && nonconv == 0;
  out.detail = "min margin/scale " + fmt("%.2e", worst) + ", p=2 equality " + fmt("%.1e", eq) + ", " +
               std::to_string(nonconv) + " unconverged";
  return out;
}

Outcome c6_inequalities() {
  std::size_t violations = 0, sweeps = 0;
  double worst = 1.0;
  std::uint64_t seed = 600;
  for (InequalityId id : all_inequalities)
    for (double q : default_q_grid()) {
      if (!in_range(id, q)) continue;
      const SweepResult s = sweep_inequality(id, q, 100000, ++seed, B1_exact, 1e-12);
      violations += s.violations;
      worst = std::min(worst, s.worst_margin);
      ++sweeps;
    }
  double ident = 0.0;
  std::size_t env = 0;
  for (double q : default_q_grid()) {
    if (q <= 2.0) continue;
    const ExpansionSweep e = sweep_expansion(q, 100000, ++seed);
    ident = std::max(ident, e.max_identity_error);
    env += e.envelope_violations;
  }
  return {violations == 0 && ident <= 1e-10 && env == 0,
          std::to_string(sweeps) + " sweeps x 1e5, " + std::to_string(violations) + " violations (worst " +
              fmt("%.1e", worst) + "), expansion identity " + fmt("%.1e", ident) + ", " + std::to_string(env) +
              " envelope misses"};
}

Outcome c7_hat_h() {
  const std::vector<cplx> grid{-0.5, cplx(-0.3, 0.1), -0.1, cplx(0.1, 0.1), 0.3, cplx(0.5, -0.1)};
  double gap = 0.0, margin = 1.0, stab = 1.0;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    std::vector<ExtremalSolution> coarse, fine;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      coarse.push_back(solve_min(disc(), p, d(grid[i])));
      fine.push_back(coarse.back());
      if (i + 1 < grid.size()) fine.push_back(solve_min(disc(), p, d(0.5 * (grid[i] + grid[i + 1]))));
    }
    for (std::size_t i = 0; i < coarse.size(); ++i)
      for (std::size_t j = i + 1; j < coarse.size(); ++j) {
        gap = std::max(gap, hat_H(coarse[i], coarse[j]).relative_gap());
        for (const LemmaMargin& m : lemma31_check(coarse[i], coarse[j])) margin = std::min(margin, m.margin / m.scale);
      }
    const double a = prop32_ratio(coarse), b = prop32_ratio(fine);
    stab = std::max(stab, std::max(a, b) / std::min(a, b));
  }
  return {margin >= -1e-8 && gap <= 1e-6 && stab <= 2.0,
          "min margin " + fmt("%.2e", margin) + ", form gap " + fmt("%.1e", gap) + ", ratio refinement factor " +
              fmt("%.3f", stab)};
}

Outcome c8_weighted() {
  std::vector<Point> probe;
  for (double r : {0.0, 0.3, 0.6, 0.85})
    for (int k = 0; k < 8; ++k) probe.push_back(d(std::polar(r, 0.8 * k)));
  double dev = 0.0, energy = 0.0, diag = 0.0;
  for (double p : {1.25, 1.5, 2.0})
    for (double r : {0.3, 0.5}) {
      const Thm61Report t = thm61_check(solve_min(disc(), p, d(r)), probe);
      dev = std::max({dev, t.max_deviation, t.diagonal_deviation});
      energy = std::max(energy, t.energy_error);
      diag = std::max(diag, std::abs(t.weighted.K_zz - oracle::disc_K(r)) / oracle::disc_K(r));
    }
  return {dev <= 1e-3 && energy <= 1e-4 && diag <= 1e-3,
          "identity " + fmt("%.1e", dev) + ", energy " + fmt("%.1e", energy) + ", weighted K(z,z) vs closed form " +
              fmt("%.1e", diag)};
}

Outcome c9_p_sweep() {
  const std::vector<double> grid{1.0, 1.5, 1.75, 1.9, 1.95, 2.0, 2.05, 2.1, 2.25, 2.5, 3.0, 4.0};
  std::vector<double> fine;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fine.push_back(grid[i]);
    if (i + 1 < grid.size()) fine.push_back(0.5 * (grid[i] + grid[i + 1]));
  }
  double mono = 1.0, ratio = 0.0, stab = 1.0, oracle_err = 0.0;
  for (const auto& [space, z] : {std::pair{disc(), d(0.5)}, std::pair{disc(), d(cplx(0.3, 0.2))},
                                 std::pair{bidisc(), Point{0.3, 0.2}}, std::pair{bidisc(), Point{cplx(0.1, 0.2), -0.3}}}) {
    const PSweep a = p_sweep(space, z, grid, 2.0), b = p_sweep(space, z, fine, 2.0);
    for (const PSweep* s : {&a, &b})
      for (std::size_t i = 0; i + 1 < s->rows.size(); ++i)
        mono = std::min(mono, (s->rows[i].normalized - s->rows[i + 1].normalized) / s->rows[i].normalized);
    const double K = space->domain().dimension() == 1 ? oracle::disc_K(z[0]) : oracle::bidisc_K(z[0], z[1]);
    for (const SweepRow& r : a.rows) oracle_err = std::max(oracle_err, std::abs(r.K - K) / K);
    const double floor = std::max(a.noise_ratio, b.noise_ratio);
    const double ra = std::max(a.modulus_ratio, floor), rb = std::max(b.modulus_ratio, floor);
    ratio = std::max({ratio, a.modulus_ratio, b.modulus_ratio});
    stab = std::max(stab, std::max(ra, rb) / std::min(ra, rb));
  }
  return {mono >= -1e-6 && std::isfinite(ratio) && stab <= 2.0,
          "min step " + fmt("%.2e", mono) + ", modulus ratio " + fmt("%.1e", ratio) + " (refinement factor " +
              fmt("%.2f", stab) + "), K vs closed form " + fmt("%.1e", oracle_err)};
}

Outcome c10_zero_free() {
  std::vector<Point> dprobe, bprobe;
  for (double r : {0.0, 0.3, 0.6, 0.8})
    for (int k = 0; k < 6; ++k) dprobe.push_back(d(std::polar(r, 1.1 * k)));
  for (double r1 : {0.0, 0.3, 0.6})
    for (double r2 : {0.0, 0.4})
      for (int k = 0; k < 3; ++k) bprobe.push_back({std::polar(r1, 2.1 * k), std::polar(r2, -1.3 * k)});
  const MpkReport md = mpk_probe(disc(), 2, d(0.5), dprobe);
  const MpkReport mb = mpk_probe(bidisc(), 2, {0.3, 0.2}, bprobe);
  // independent: solver m_4 squared against the closed-form m_2
  const ExtremalSolution m4 = solve_min(disc(), 4.0, d(0.5));
  double vs_oracle = 0.0;
  for (const Point& w : dprobe) vs_oracle = std::max(vs_oracle, std::abs(std::pow(m4.minimizer(w), 2) - oracle::disc_m(2.0, w[0], 0.5)));

  const SpacePtr sp = disc();
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(sp->size());
  for (std::size_t k = 0; k < sp->size(); ++k) {
    if (sp->basis().indices[k][0] == 0) u[k] = -0.1 / 0.4 / sp->scale()[k];
    if (sp->basis().indices[k][0] == 1) u[k] = 1.0 / 0.4 / sp->scale()[k];
  }
  const ZeroFreeGate g = zero_free_gate(sp, u);
  const double dd = md.gate_passed ? md.entries.back().sup_deviation : 1.0;
  const double db = mb.gate_passed ? mb.entries.back().sup_deviation : 1.0;
  return {dd <= 1e-3 && db <= 1e-2 && vs_oracle <= 1e-3 && !g.passed,
          "disc " + fmt("%.1e", dd) + " (closed form " + fmt("%.1e", vs_oracle) + "), bidisc " + fmt("%.1e", db) +
              ", near-zero case " + (g.passed ? "not rejected" : "rejected")};
}

Outcome c11_atlas() {
  const Domain bd = dom("bidisc");
  const MomentTable small(bd, 10), big(bd, 40);
  oracle::Rng rng(11);
  double worst = 0.0;
  bool tails = true;
  for (int i = 0; i < 10; ++i) {
    const Point z{rng.in_disc(0.6), rng.in_disc(0.6)};
    const ExtremalSolution s = solve_l2(bidisc(), {}, z);
    for (int k = 0; k < 10; ++k) {
      const Point w{rng.in_disc(0.6), rng.in_disc(0.6)};
      const MomentTable::Value vb = big.evaluate(w, z), vs = small.evaluate(w, z);
      tails = tails && vb.tail_valid && vs.tail_valid;
      const double bound = vs.tail_bound + vb.tail_bound + 1e-10 * std::abs(vb.kernel);
      worst = std::max(worst, std::abs(s.kernel(w) - vb.kernel) / bound);
    }
  }
  bool wind = true;
  for (int k : {1, 2}) {
    const WindingResult w = zero_order([k](cplx t) { return std::pow(t, k); }, 0.0, 0.5);
    wind = wind && w.order == k && std::abs(w.raw - k) < 1e-3;
  }
  return {worst <= 1.0 && tails && wind,
          "100 pairs, max |diff|/bound " + fmt("%.3f", worst) + ", winding orders " + (wind ? "exact" : "wrong")};
}

Outcome c12_p1_limit() {
  const std::vector<double> seq{1.5, 1.25, 1.1, 1.05, 1.02};
  std::vector<Point> dprobe, bprobe;
  for (double r : {0.0, 0.4, 0.8})
    for (int k = 0; k < 5; ++k) dprobe.push_back(d(std::polar(r, 1.3 * k)));
  for (double r : {0.0, 0.3, 0.6})
    for (int k = 0; k < 4; ++k) bprobe.push_back({std::polar(r, 1.7 * k), std::polar(0.5 * r, -0.9 * k)});
  const K1Probe kd = k1_limit_probe(disc(), d(0.5), seq, dprobe);
  const K1Probe kb = k1_limit_probe(bidisc(), {0.3, 0.2}, seq, bprobe);
  const BorelCaratheodory bc = borel_caratheodory_suite(10000, 12);
  std::string diffs;
  for (double x : kb.minimizer_sup_diffs) diffs += (diffs.empty() ? "" : " ") + fmt("%.3f", x);
  return {kd.K_differences.back() <= 1e-3 && kb.monotone_shrinking && bc.violations == 0,
          "disc tail diff " + fmt("%.1e", kd.K_differences.back()) + ", bidisc minimizer diffs " + diffs +
              ", Borel-Caratheodory violations " + std::to_string(bc.violations) + "/1e4"};
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select criteria by number
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"disc kernel oracle", c1_disc_oracle},
      {"reproducing formula", c2_reproducing},
      {"gradient identity", c3_gradient},
      {"Holder exponents", c4_holder},
      {"Levi-form bound", c5_levi},
      {"inequality kit", c6_inequalities},
      {"kernel-difference energy", c7_hat_h},
      {"weighted kernel identity", c8_weighted},
      {"p-sweep", c9_p_sweep},
      {"zero-free powers", c10_zero_free},
      {"Reinhardt atlas", c11_atlas},
      {"p -> 1 limit", c12_p1_limit},
  };
  int failed = 0;
  std::size_t ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("[%s] criterion %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", ran - failed, ran);
  return failed ? 1 : 0;
}
