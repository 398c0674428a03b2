#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "pberg/quadrature.hpp"

namespace pberg {

using MultiIndex = std::array<int, 2>;

/// Holomorphic polynomials of total degree <= degree. Basis function k is
/// sum_a monomial_a * transform(a, k); transform is the identity for raw
/// monomials.
struct Basis {
  int dimension = 1;
  int degree = 0;
  std::vector<MultiIndex> indices;
  bool orthonormalized = false;
  Eigen::MatrixXcd transform;

  std::size_t size() const { return indices.size(); }
};

Basis monomial_basis(const Domain& domain, int degree);

/// Orthonormalizes with respect to the unweighted quadrature inner product.
Basis orthonormalize(const Basis& basis, const QuadratureRule& rule);

/// G[j, k] = sum_nodes w * weight * phi_j * conj(phi_k).
Eigen::MatrixXcd gram_matrix(const Basis& basis, const QuadratureRule& rule, const std::vector<double>& weight);

/// Unweighted Gram matrix.
Eigen::MatrixXcd gram_matrix(const Basis& basis, const QuadratureRule& rule);

struct EvalTable {
  Eigen::MatrixXcd values;               // [point x basis]
  std::vector<Eigen::MatrixXcd> first;   // per direction: X phi
  std::vector<Eigen::MatrixXcd> second;  // per direction: X X phi
};

EvalTable eval(const Basis& basis, const std::vector<Point>& points, const std::vector<Point>& directions = {},
               int max_derivative_order = 0);

/// Value of the monomial zeta^alpha and its partial derivatives.
cplx monomial(const MultiIndex& alpha, const Point& zeta);
cplx monomial_partial(const MultiIndex& alpha, const Point& zeta, int coordinate);

/// Closed-form moment int_Omega |zeta^alpha|^2 where available (model
/// domains), otherwise by one-dimensional radial quadrature.
double exact_moment(const Domain& domain, const MultiIndex& alpha);

}  // namespace pberg
