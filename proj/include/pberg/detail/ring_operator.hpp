#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pberg/basis.hpp"
#include "pberg/quadrature.hpp"

namespace pberg::detail {

/// Fast application of the node-evaluation matrix A[node, alpha] =
/// s_alpha * zeta^alpha on a ring-structured quadrature rule, using the
/// separable angular factor e^{i alpha theta}.
class RingOperator {
 public:
  RingOperator(const QuadratureRule& rule, std::vector<MultiIndex> indices, std::vector<double> scale, int degree);

  std::size_t size() const { return indices_.size(); }
  std::size_t nodes() const { return rings_.size() * per_ring_; }

  /// f = A u at every node.
  Eigen::VectorXcd synthesize(const Eigen::VectorXcd& u) const;
  /// A^H diag(w) h, w the quadrature weights.
  Eigen::VectorXcd analyze(const Eigen::VectorXcd& h) const;
  /// P = A^H diag(w d) A and Q = A^T diag(w e) A.
  void hessian_blocks(const Eigen::VectorXd& d, const Eigen::VectorXcd& e, Eigen::MatrixXcd& P,
                      Eigen::MatrixXcd& Q) const;
  /// A^H diag(w d) A.
  Eigen::MatrixXcd weighted_gram(const Eigen::VectorXd& d) const;

 private:
  void spectra(const Eigen::VectorXcd& values, const Eigen::MatrixXcd& F, std::vector<Eigen::MatrixXcd>& out) const;
  void assemble(const std::vector<Eigen::MatrixXcd>& spec, bool difference, Eigen::MatrixXcd& out) const;

  int n_ = 1;
  int degree_ = 0;
  int M_ = 0;
  std::size_t per_ring_ = 0;
  std::vector<QuadratureRule::Ring> rings_;
  std::vector<MultiIndex> indices_;
  std::vector<double> scale_;
  Eigen::MatrixXcd E_;       // [M x (degree+1)], e^{i a theta_j}
  Eigen::MatrixXcd Fminus_;  // [(2d+1) x M], e^{i m theta_j}, m in [-d, d]
  Eigen::MatrixXcd Fplus_;   // [(2d+1) x M], m in [0, 2d]
};

}  // namespace pberg::detail
