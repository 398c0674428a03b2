#include "pberg/detail/ring_operator.hpp"

#include <numbers>

namespace pberg::detail {

using std::numbers::pi;

RingOperator::RingOperator(const QuadratureRule& rule, std::vector<MultiIndex> indices, std::vector<double> scale,
                           int degree)
    : n_(rule.dimension),
      degree_(degree),
      M_(rule.angular),
      per_ring_(rule.nodes_per_ring()),
      rings_(rule.rings),
      indices_(std::move(indices)),
      scale_(std::move(scale)) {
  if (scale_.size() != indices_.size()) throw InvalidInput("scale and index lists differ in length");
  const int d = degree_;
  E_.resize(M_, d + 1);
  Fminus_.resize(2 * d + 1, M_);
  Fplus_.resize(2 * d + 1, M_);
  for (int j = 0; j < M_; ++j) {
    const double theta = 2.0 * pi * j / M_;
    for (int a = 0; a <= d; ++a) E_(j, a) = std::polar(1.0, a * theta);
    for (int m = 0; m <= 2 * d; ++m) {
      Fminus_(m, j) = std::polar(1.0, (m - d) * theta);
      Fplus_(m, j) = std::polar(1.0, m * theta);
    }
  }
}

namespace {

// v[alpha] = s_alpha r1^a1 r2^a2 on one ring
void ring_profile(const QuadratureRule::Ring& ring, const std::vector<MultiIndex>& idx, const std::vector<double>& s,
                  int d, std::vector<double>& v, std::vector<double>& p1, std::vector<double>& p2) {
  p1.resize(d + 1);
  p2.resize(d + 1);
  p1[0] = p2[0] = 1.0;
  for (int e = 1; e <= d; ++e) {
    p1[e] = p1[e - 1] * ring.r1;
    p2[e] = p2[e - 1] * ring.r2;
  }
  v.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) v[k] = s[k] * p1[idx[k][0]] * p2[idx[k][1]];
}

}  // namespace

Eigen::VectorXcd RingOperator::synthesize(const Eigen::VectorXcd& u) const {
  const int d = degree_;
  const std::size_t R = rings_.size(), N = size();
  Eigen::VectorXcd out(R * per_ring_);
  std::vector<double> v, p1, p2;
  if (n_ == 1) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d + 1, R);
    for (std::size_t k = 0; k < R; ++k) {
      ring_profile(rings_[k], indices_, scale_, d, v, p1, p2);
      for (std::size_t a = 0; a < N; ++a) C(indices_[a][0], k) = u[a] * v[a];
    }
    Eigen::Map<Eigen::MatrixXcd>(out.data(), M_, R).noalias() = E_ * C;
  } else {
    Eigen::MatrixXcd C(d + 1, d + 1), tmp(M_, d + 1);
    for (std::size_t k = 0; k < R; ++k) {
      ring_profile(rings_[k], indices_, scale_, d, v, p1, p2);
      C.setZero();
      for (std::size_t a = 0; a < N; ++a) C(indices_[a][0], indices_[a][1]) = u[a] * v[a];
      tmp.noalias() = E_ * C;
      Eigen::Map<Eigen::MatrixXcd>(out.data() + k * per_ring_, M_, M_).noalias() = tmp * E_.transpose();
    }
  }
  return out;
}

Eigen::VectorXcd RingOperator::analyze(const Eigen::VectorXcd& h) const {
  const int d = degree_;
  const std::size_t R = rings_.size(), N = size();
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(N);
  std::vector<double> v, p1, p2;
  if (n_ == 1) {
    Eigen::MatrixXcd H = Eigen::Map<const Eigen::MatrixXcd>(h.data(), M_, R);
    for (std::size_t k = 0; k < R; ++k) H.col(k) *= rings_[k].weight;
    const Eigen::MatrixXcd T = E_.adjoint() * H;
    for (std::size_t k = 0; k < R; ++k) {
      ring_profile(rings_[k], indices_, scale_, d, v, p1, p2);
      for (std::size_t a = 0; a < N; ++a) g[a] += T(indices_[a][0], k) * v[a];
    }
  } else {
    const Eigen::MatrixXcd Ebar = E_.conjugate();
    Eigen::MatrixXcd tmp(d + 1, M_), G(d + 1, d + 1);
    for (std::size_t k = 0; k < R; ++k) {
      ring_profile(rings_[k], indices_, scale_, d, v, p1, p2);
      const Eigen::Map<const Eigen::MatrixXcd> H(h.data() + k * per_ring_, M_, M_);
      tmp.noalias() = E_.adjoint() * H;
      G.noalias() = tmp * Ebar;
      const double w = rings_[k].weight;
      for (std::size_t a = 0; a < N; ++a) g[a] += w * v[a] * G(indices_[a][0], indices_[a][1]);
    }
  }
  return g;
}

void RingOperator::spectra(const Eigen::VectorXcd& values, const Eigen::MatrixXcd& F,
                           std::vector<Eigen::MatrixXcd>& out) const {
  const std::size_t R = rings_.size();
  out.resize(R);
  if (n_ == 1) {
    Eigen::MatrixXcd D = Eigen::Map<const Eigen::MatrixXcd>(values.data(), M_, R);
    for (std::size_t k = 0; k < R; ++k) D.col(k) *= rings_[k].weight;
    const Eigen::MatrixXcd S = F * D;
    for (std::size_t k = 0; k < R; ++k) out[k] = S.col(k);
  } else {
    Eigen::MatrixXcd tmp(F.rows(), M_);
    for (std::size_t k = 0; k < R; ++k) {
      const Eigen::Map<const Eigen::MatrixXcd> D(values.data() + k * per_ring_, M_, M_);
      tmp.noalias() = F * D;
      out[k].noalias() = rings_[k].weight * tmp * F.transpose();
    }
  }
}

void RingOperator::assemble(const std::vector<Eigen::MatrixXcd>& spec, bool difference, Eigen::MatrixXcd& out) const {
  const int d = degree_;
  const std::size_t N = size();
  const int stride = 2 * d + 1;
  std::vector<int> pos(N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      int m1, m2;
      if (difference) {
        m1 = indices_[b][0] - indices_[a][0] + d;
        m2 = indices_[b][1] - indices_[a][1] + d;
      } else {
        m1 = indices_[b][0] + indices_[a][0];
        m2 = indices_[b][1] + indices_[a][1];
      }
      pos[a + N * b] = n_ == 1 ? m1 : m1 + stride * m2;
    }
  out = Eigen::MatrixXcd::Zero(N, N);
  std::vector<double> v, p1, p2;
  for (std::size_t k = 0; k < rings_.size(); ++k) {
    ring_profile(rings_[k], indices_, scale_, d, v, p1, p2);
    const cplx* S = spec[k].data();
    for (std::size_t b = 0; b < N; ++b) {
      cplx* col = out.col(b).data();
      const int* pb = pos.data() + N * b;
      const double vb = v[b];
      for (std::size_t a = 0; a < N; ++a) col[a] += (v[a] * vb) * S[pb[a]];
    }
  }
}

void RingOperator::hessian_blocks(const Eigen::VectorXd& d, const Eigen::VectorXcd& e, Eigen::MatrixXcd& P,
                                  Eigen::MatrixXcd& Q) const {
  std::vector<Eigen::MatrixXcd> spec;
  spectra(d.cast<cplx>(), Fminus_, spec);
  assemble(spec, true, P);
  spectra(e, Fplus_, spec);
  assemble(spec, false, Q);
}

Eigen::MatrixXcd RingOperator::weighted_gram(const Eigen::VectorXd& d) const {
  std::vector<Eigen::MatrixXcd> spec;
  spectra(d.cast<cplx>(), Fminus_, spec);
  Eigen::MatrixXcd P;
  assemble(spec, true, P);
  return P;
}

}  // namespace pberg::detail
