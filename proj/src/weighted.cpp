#include "pberg/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pberg {

double WeightedKernelSolution::self_consistency(const std::vector<double>& weight) const {
  const Eigen::VectorXcd k = l2.node_values() * K_zz;
  const auto& w = l2.space->rule().weights;
  double energy = 0.0;
  for (Eigen::Index i = 0; i < k.size(); ++i) energy += w[i] * (weight.empty() ? 1.0 : weight[i]) * std::norm(k[i]);
  return std::abs(energy - K_zz) / K_zz;
}

WeightedKernelSolution weighted_bergman(SpacePtr space, const std::vector<double>& weight, const Point& z,
                                        const std::string& description, double condition_limit) {
  if (!weight.empty() && weight.size() != space->rule().size())
    throw InvalidInput("weight must have one value per quadrature node");
  for (double v : weight)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("weight must be finite and positive on the nodes");
  WeightedKernelSolution out;
  out.weight_description = description;
  out.z = z;
  out.l2 = solve_l2(space, weight, z, condition_limit);
  out.K_zz = out.l2.K_p_z;
  out.gram_condition = out.l2.gram_condition;
  return out;
}

std::vector<double> minimizer_weight(const ExtremalSolution& sol, double* floor_out) {
  const Eigen::VectorXcd m = sol.node_values();
  const double floor = 1e-8 * m.cwiseAbs().maxCoeff();
  std::vector<double> w(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) w[i] = std::pow(std::max(std::abs(m[i]), floor), sol.p - 2.0);
  if (floor_out) *floor_out = floor;
  return w;
}

Thm61Report thm61_check(const ExtremalSolution& sol, const std::vector<Point>& probe) {
  Thm61Report r;
  r.p = sol.p;
  r.z = sol.z;
  r.in_theorem_range = sol.p >= 1.0 && sol.p <= 2.0;
  const std::vector<double> weight = minimizer_weight(sol, &r.weight_floor);
  r.weighted = weighted_bergman(sol.space, weight, sol.z, "(2-p) log|m_p(., z)|");
  r.weighted.weight_floor = r.weight_floor;
  const double K = sol.K_p_z;
  for (const Point& zeta : probe)
    r.max_deviation = std::max(r.max_deviation, std::abs(sol.kernel(zeta) - r.weighted.kernel(zeta)) / K);
  r.diagonal_deviation = std::abs(r.weighted.K_zz - K) / K;

  const Eigen::VectorXcd k = sol.node_values() * K;
  const auto& w = sol.space->rule().weights;
  double energy = 0.0;
  for (Eigen::Index i = 0; i < k.size(); ++i) energy += w[i] * weight[i] * std::norm(k[i]);
  r.energy_error = std::abs(energy - K) / K;
  r.self_consistency = r.weighted.self_consistency(weight);
  return r;
}

ZeroFreeGate zero_free_gate(SpacePtr space, const Eigen::VectorXcd& coefficients, double threshold) {
  const Eigen::VectorXcd f = space->op().synthesize(coefficients);
  Eigen::Index arg = 0;
  const double node_min = f.cwiseAbs().minCoeff(&arg);
  ZeroFreeGate g;
  g.min_modulus = node_min;
  g.witness = space->rule().nodes[arg];
  const int n = space->domain().dimension();
  Point zeta = g.witness;
  for (int it = 0; it < 30; ++it) {
    const cplx v = space->evaluate(coefficients, zeta);
    if (std::abs(v) < g.min_modulus) {
      g.min_modulus = std::abs(v);
      g.witness = zeta;
    }
    if (std::abs(v) == 0.0) break;
    Point grad{};
    double gn = 0.0;
    for (int j = 0; j < n; ++j) {
      grad[j] = space->derivative_row(zeta, real_unit_vector(n, j)) * coefficients;
      gn += std::norm(grad[j]);
    }
    if (gn == 0.0) break;
    Point step{};
    for (int j = 0; j < n; ++j) step[j] = v * std::conj(grad[j]) / gn;
    const Point next = zeta - step;
    if (!space->domain().contains(next)) break;
    zeta = next;
  }
  g.passed = g.min_modulus > threshold;
  if (!g.passed)
    g.diagnostic = "minimizer has a near-zero: |m| = " + std::to_string(g.min_modulus) + " at " +
                   format_point(g.witness, n);
  return g;
}

bool continued_log(const ExtremalSolution& sol, const Point& zeta, cplx& out, int steps) {
  const Domain& dom = sol.space->domain();
  cplx prev = sol.minimizer(sol.z);
  if (prev == 0.0) return false;
  double phase = std::arg(prev);
  for (int k = 1; k <= steps; ++k) {
    const Point x = sol.z + (double(k) / steps) * (zeta - sol.z);
    if (!dom.contains(x)) return false;
    const cplx m = sol.minimizer(x);
    if (m == 0.0) return false;
    const double turn = std::arg(m / prev);
    if (std::abs(turn) > std::numbers::pi / 4.0) return false;
    phase += turn;
    prev = m;
  }
  out = cplx(std::log(std::abs(prev)), phase);
  return true;
}

ZeroFreeReport zero_free_identity(const ExtremalSolution& sol_p, double s, const std::vector<Point>& probe,
                                  const SolverOptions& options, double threshold) {
  if (!(s >= sol_p.p)) throw InvalidInput("zero-free identity requires s >= p");
  ZeroFreeReport r;
  r.p = sol_p.p;
  r.s = s;
  r.z = sol_p.z;
  r.gate = zero_free_gate(sol_p.space, sol_p.coefficients, threshold);
  if (!r.gate.passed) {
    r.skipped = true;
    r.skip_reason = r.gate.diagnostic;
    return r;
  }
  const ExtremalSolution sol_s = solve_min(sol_p.space, s, sol_p.z, options, &sol_p);
  r.kernel_deviation = std::abs(sol_s.K_p_z - sol_p.K_p_z) / sol_p.K_p_z;
  const double e = sol_p.p / s;
  for (const Point& zeta : probe) {
    cplx log_m;
    if (!continued_log(sol_p, zeta, log_m)) {
      r.branch_continuous = false;
      continue;
    }
    const cplx power = std::exp(e * log_m);
    r.minimizer_deviation = std::max(r.minimizer_deviation, std::abs(sol_s.minimizer(zeta) - power));
    r.modulus_identity =
        std::max(r.modulus_identity, std::abs(std::abs(power) - std::pow(std::abs(sol_p.minimizer(zeta)), e)));
  }
  return r;
}

}  // namespace pberg
