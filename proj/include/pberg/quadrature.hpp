#pragma once

#include <vector>

#include "pberg/domain.hpp"

namespace pberg {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int count);

/// Tensor polar rule on a Reinhardt domain.
///
/// Nodes are grouped in rings: a ring is a fixed radius vector (r1, r2)
/// combined with the uniform angular grid theta_j = 2 pi j / M in every
/// coordinate. Node index = ring * M^n + j1 + M * j2, and all nodes of a
/// ring share one weight.
struct QuadratureRule {
  struct Ring {
    double r1 = 0.0;
    double r2 = 0.0;
    double weight = 0.0;  // per node, angular factor included
  };

  int dimension = 1;
  int order = 0;
  int angular = 0;
  std::vector<Ring> rings;
  std::vector<Point> nodes;
  std::vector<double> weights;
  /// Distance from the outermost node shell to the boundary.
  double boundary_mesh = 0.0;

  std::size_t size() const { return nodes.size(); }
  std::size_t nodes_per_ring() const { return dimension == 1 ? angular : std::size_t(angular) * angular; }
  double total_weight() const;
};

/// Builds the rule with order + 1 radial Gauss-Legendre points per radial
/// variable and `angular` equispaced angles (default 4 * order + 2).
QuadratureRule quadrature(const Domain& domain, int order, int angular = 0);

/// Throws InvalidInput when the angular count cannot resolve a basis of
/// the given degree (angular < 4 * degree + 2).
void require_compatible(const QuadratureRule& rule, int degree);

}  // namespace pberg
