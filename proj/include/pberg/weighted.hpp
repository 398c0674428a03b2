#pragma once

#include <string>
#include <vector>

#include "pberg/extremal.hpp"

namespace pberg {

/// Weighted L^2 Bergman kernel K_{Omega,phi}(., z) on the finite-dimensional
/// space, with node weight e^{-phi}.
struct WeightedKernelSolution {
  std::string weight_description;
  double weight_floor = 0.0;  // eps_w applied to |m_p| before the power, 0 if none
  Point z{};
  ExtremalSolution l2;        // minimizer of the weighted L^2 problem at z
  double K_zz = 0.0;
  double gram_condition = 1.0;

  cplx kernel(const Point& zeta) const { return l2.kernel(zeta); }
  /// |sum w e^{-phi} |K(., z)|^2 - K(z, z)| / K(z, z).
  double self_consistency(const std::vector<double>& weight) const;
};

WeightedKernelSolution weighted_bergman(SpacePtr space, const std::vector<double>& weight, const Point& z,
                                        const std::string& description = "custom", double condition_limit = 1e12);

/// |m_p(., z)|^{p-2} on the nodes, with |m_p| floored at 1e-8 max |m_p|.
std::vector<double> minimizer_weight(const ExtremalSolution& sol, double* floor_out = nullptr);

struct Thm61Report {
  double p = 2.0;
  Point z{};
  double max_deviation = 0.0;  // max_zeta |K_p(zeta, z) - K_{2,p,z}(zeta, z)| / K_p(z)
  double diagonal_deviation = 0.0;  // |K_{2,p,z}(z, z) - K_p(z)| / K_p(z)
  double energy_error = 0.0;   // |sum w |m_p|^{p-2} |K_p(., z)|^2 - K_p(z)| / K_p(z)
  double self_consistency = 0.0;
  double weight_floor = 0.0;
  bool in_theorem_range = true;  // 1 <= p <= 2
  WeightedKernelSolution weighted;
};

Thm61Report thm61_check(const ExtremalSolution& sol, const std::vector<Point>& probe);

struct ZeroFreeGate {
  bool passed = false;
  double min_modulus = 0.0;
  Point witness{};
  std::string diagnostic;
};

/// Checks min |f| > threshold over the nodes, polished by Newton steps
/// towards a zero from the smallest node value.
ZeroFreeGate zero_free_gate(SpacePtr space, const Eigen::VectorXcd& coefficients, double threshold = 1e-3);

struct ZeroFreeReport {
  double p = 2.0;
  double s = 2.0;
  Point z{};
  ZeroFreeGate gate;
  bool skipped = false;
  std::string skip_reason;
  double kernel_deviation = 0.0;   // |K_s(z) - K_p(z)| / K_p(z)
  double minimizer_deviation = 0.0;  // sup_probe |m_s - m_p^{p/s}|
  double modulus_identity = 0.0;   // sup_probe ||m_p^{p/s}| - |m_p|^{p/s}|
  bool branch_continuous = true;
};

/// Continuous logarithm of the minimizer along the segment from z to zeta.
/// Returns false (and leaves `out` unspecified) when a step turns by more
/// than pi / 4 or leaves the domain.
bool continued_log(const ExtremalSolution& sol, const Point& zeta, cplx& out, int steps = 64);

ZeroFreeReport zero_free_identity(const ExtremalSolution& sol_p, double s, const std::vector<Point>& probe,
                                  const SolverOptions& options = {}, double threshold = 1e-3);

}  // namespace pberg
