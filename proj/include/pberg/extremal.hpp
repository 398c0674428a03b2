#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "pberg/basis.hpp"
#include "pberg/detail/ring_operator.hpp"

namespace pberg {

/// Finite-dimensional stage for the L^p problems: a domain, its monomial
/// basis of degree d, a ring quadrature rule and the fast evaluation
/// operator. Coefficients everywhere below refer to the scaled monomials
/// psi_alpha = s_alpha zeta^alpha with s_alpha = (quadrature moment)^{-1/2},
/// which are orthonormal for the unweighted quadrature inner product.
class LpSpace {
 public:
  LpSpace(Domain domain, int degree, int order = 0, int angular = 0);

  const Domain& domain() const { return domain_; }
  const Basis& basis() const { return basis_; }
  const QuadratureRule& rule() const { return rule_; }
  const detail::RingOperator& op() const { return *op_; }
  int degree() const { return basis_.degree; }
  std::size_t size() const { return basis_.size(); }
  const std::vector<double>& scale() const { return scale_; }
  double boundary_mesh() const { return rule_.boundary_mesh; }
  /// Condition number of the raw monomial Gram matrix (reported only).
  double raw_condition() const { return raw_condition_; }
  /// Condition number of the working (scaled) Gram matrix.
  double condition() const { return condition_; }

  /// psi_alpha(zeta) for all alpha.
  Eigen::RowVectorXcd row(const Point& zeta) const;
  /// X psi_alpha(zeta).
  Eigen::RowVectorXcd derivative_row(const Point& zeta, const Point& X) const;
  /// X X psi_alpha(zeta).
  Eigen::RowVectorXcd second_row(const Point& zeta, const Point& X) const;
  cplx evaluate(const Eigen::VectorXcd& u, const Point& zeta) const { return row(zeta) * u; }
  /// sum_nodes w |f|^p.
  double lp_power(const Eigen::VectorXcd& u, double p) const;
  /// Converts scaled coefficients to raw monomial coefficients.
  Eigen::VectorXcd monomial_coefficients(const Eigen::VectorXcd& u) const;

  /// Throws InvalidInput unless zeta is inside the domain and resolvable
  /// by the quadrature (delta(zeta) >= 10 * mesh).
  void require_interior(const Point& zeta) const;

 private:
  Domain domain_;
  Basis basis_;
  QuadratureRule rule_;
  std::vector<double> scale_;
  std::unique_ptr<detail::RingOperator> op_;
  double raw_condition_ = 1.0;
  double condition_ = 1.0;
};

using SpacePtr = std::shared_ptr<const LpSpace>;

SpacePtr make_space(const Domain& domain, int degree, int order = 0, int angular = 0);

struct SolverOptions {
  double tol = 1e-10;
  int max_iterations = 100;
  /// Smoothing values relative to max |f| on the nodes.
  std::vector<double> eps_schedule{1e-3, 1e-6, 1e-9};
  double condition_limit = 1e12;
};

/// Minimizer of sum w |f|^p subject to linear constraints C u = b.
struct ConstrainedMinimum {
  Eigen::VectorXcd u;
  double objective = 0.0;  // sum w |f|^p, unsmoothed
  double smoothing_eps = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
};

/// Weighted least squares start: argmin u^H G u subject to C u = b,
/// G = A^H diag(w weight) A.
Eigen::VectorXcd l2_start(const LpSpace& space, const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                          const std::vector<double>& weight = {});

ConstrainedMinimum minimize_lp(const LpSpace& space, double p, const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                               const SolverOptions& options = {}, const Eigen::VectorXcd* warm = nullptr);

struct ExtremalSolution {
  SpacePtr space;
  double p = 2.0;
  double q = 2.0;
  Point z{};
  Eigen::VectorXcd coefficients;
  double m_p_z = 0.0;
  double K_p_z = 0.0;
  double smoothing_eps = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  double gram_condition = 1.0;

  /// m_p(zeta, z).
  cplx minimizer(const Point& zeta) const { return space->evaluate(coefficients, zeta); }
  /// X m_p(., z) at zeta.
  cplx minimizer_derivative(const Point& zeta, const Point& X) const {
    return space->derivative_row(zeta, X) * coefficients;
  }
  /// K_p(zeta, z).
  cplx kernel(const Point& zeta) const { return minimizer(zeta) * K_p_z; }
  /// Minimizer values on the quadrature nodes.
  Eigen::VectorXcd node_values() const { return space->op().synthesize(coefficients); }
  /// g_z(zeta) = |m_p|^{p-2} m_p / m_p(z)^p.
  cplx dual_density(const Point& zeta) const;
};

/// p = 2 path with an arbitrary nonnegative node weight (empty = 1).
ExtremalSolution solve_l2(SpacePtr space, const std::vector<double>& weight, const Point& z,
                          double condition_limit = 1e12);

/// Solves min ||f||_p subject to f(z) = 1. p = 1 is reached by continuation
/// in p. `warm` may be a solution at a nearby point or exponent.
ExtremalSolution solve_min(SpacePtr space, double p, const Point& z, const SolverOptions& options = {},
                           const ExtremalSolution* warm = nullptr);

/// K_p(zeta, z).
cplx off_diag(const ExtremalSolution& sol, const Point& zeta);

/// |f(z) - sum w |m_p|^{p-2} conj(K_p(., z)) f| / max(1, |f(z)|) for the
/// test function with scaled coefficients `test`.
double reproducing_residual(const ExtremalSolution& sol, const Eigen::VectorXcd& test);

struct DirectionalFunctional {
  double p = 2.0;
  Point z{};
  Point X{};
  double value = 0.0;  // M^(1)_p(z; X)
  Eigen::VectorXcd coefficients;
  int iterations = 0;
  double kkt_residual = 0.0;
};

/// 1 / min{||f||_p : X f(z) = 1}.
DirectionalFunctional derivative_functional(SpacePtr space, double p, const Point& z, const Point& X,
                                            const SolverOptions& options = {},
                                            const DirectionalFunctional* warm = nullptr);

struct Metrics {
  double M_hat = 0.0;   // derivative functional without the vanishing constraint
  double B_hat = 0.0;   // K_p(z)^{-1/p} M_hat
  double M_zero = 0.0;  // same with f(z) = 0 imposed
  double B = 0.0;       // K_p(z)^{-1/p} M_zero
};

Metrics metrics(const ExtremalSolution& sol, const Point& X, const SolverOptions& options = {});

}  // namespace pberg
