#include "pberg/extremal.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace pberg {

// ---------------------------------------------------------------------------
// LpSpace

LpSpace::LpSpace(Domain domain, int degree, int order, int angular)
    : domain_(std::move(domain)), basis_(monomial_basis(domain_, degree)) {
  const int n = domain_.dimension();
  if (order == 0) order = n == 1 ? std::max(4, 2 * degree) : std::max(4, degree + 4);
  if (angular == 0) angular = 4 * degree + 2;
  rule_ = quadrature(domain_, order, angular);
  require_compatible(rule_, degree);

  const std::size_t N = basis_.size();
  scale_.resize(N);
  const double per = double(rule_.nodes_per_ring());
  double mmax = 0.0, mmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < N; ++k) {
    const auto& a = basis_.indices[k];
    double moment = 0.0;
    for (const auto& ring : rule_.rings)
      moment += ring.weight * per * std::pow(ring.r1, 2 * a[0]) * std::pow(ring.r2, 2 * a[1]);
    if (!(moment > 0.0)) throw IllConditioned("vanishing quadrature moment");
    scale_[k] = 1.0 / std::sqrt(moment);
    mmax = std::max(mmax, moment);
    mmin = std::min(mmin, moment);
  }
  raw_condition_ = mmax / mmin;
  op_ = std::make_unique<detail::RingOperator>(rule_, basis_.indices, scale_, degree);

  const Eigen::MatrixXcd G = op_->weighted_gram(Eigen::VectorXd::Ones(op_->nodes()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  condition_ = ev.maxCoeff() / std::max(ev.minCoeff(), 1e-300);
}

SpacePtr make_space(const Domain& domain, int degree, int order, int angular) {
  return std::make_shared<const LpSpace>(domain, degree, order, angular);
}

Eigen::RowVectorXcd LpSpace::row(const Point& zeta) const {
  Eigen::RowVectorXcd r(size());
  for (std::size_t k = 0; k < size(); ++k) r[k] = scale_[k] * monomial(basis_.indices[k], zeta);
  return r;
}

Eigen::RowVectorXcd LpSpace::derivative_row(const Point& zeta, const Point& X) const {
  Eigen::RowVectorXcd r(size());
  for (std::size_t k = 0; k < size(); ++k) {
    const auto& a = basis_.indices[k];
    r[k] = scale_[k] * (X[0] * monomial_partial(a, zeta, 0) + X[1] * monomial_partial(a, zeta, 1));
  }
  return r;
}

Eigen::RowVectorXcd LpSpace::second_row(const Point& zeta, const Point& X) const {
  const EvalTable t = eval(basis_, {zeta}, {X}, 2);
  Eigen::RowVectorXcd r(size());
  for (std::size_t k = 0; k < size(); ++k) r[k] = scale_[k] * t.second[0](0, k);
  return r;
}

double LpSpace::lp_power(const Eigen::VectorXcd& u, double p) const {
  const Eigen::VectorXcd f = op_->synthesize(u);
  const std::size_t per = rule_.nodes_per_ring();
  double total = 0.0;
  for (std::size_t k = 0; k < rule_.rings.size(); ++k) {
    double ring = 0.0;
    for (std::size_t j = 0; j < per; ++j) ring += std::pow(std::abs(f[k * per + j]), p);
    total += rule_.rings[k].weight * ring;
  }
  return total;
}

Eigen::VectorXcd LpSpace::monomial_coefficients(const Eigen::VectorXcd& u) const {
  Eigen::VectorXcd c(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) c[k] = u[k] * scale_[k];
  return c;
}

void LpSpace::require_interior(const Point& zeta) const {
  if (!domain_.contains(zeta)) throw InvalidInput("point " + format_point(zeta, domain_.dimension()) + " is not inside the domain");
  const double delta = boundary_distance(domain_, zeta);
  if (delta < 10.0 * rule_.boundary_mesh)
    throw InvalidInput("point " + format_point(zeta, domain_.dimension()) + " too close to the boundary (delta = " +
                       std::to_string(delta) + " < 10 * mesh = " + std::to_string(10.0 * rule_.boundary_mesh) + ")");
}

// ---------------------------------------------------------------------------
// Constrained minimization

namespace {

Eigen::MatrixXcd gram_with_weight(const LpSpace& space, const std::vector<double>& weight) {
  if (weight.empty()) return space.op().weighted_gram(Eigen::VectorXd::Ones(space.op().nodes()));
  if (weight.size() != space.op().nodes()) throw InvalidInput("weight must have one entry per node");
  Eigen::VectorXd d(weight.size());
  for (std::size_t i = 0; i < weight.size(); ++i) {
    if (!std::isfinite(weight[i]) || weight[i] < 0.0) throw InvalidInput("weight not finite and nonnegative at node " + std::to_string(i));
    d[i] = weight[i];
  }
  return space.op().weighted_gram(d);
}

double hermitian_condition(const Eigen::MatrixXcd& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
  return ev.maxCoeff() / ev.minCoeff();
}

// u = G^{-1} C^H (C G^{-1} C^H)^{-1} b
Eigen::VectorXcd constrained_l2(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b) {
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
  const Eigen::MatrixXcd GiCh = ldlt.solve(C.adjoint());
  const Eigen::MatrixXcd S = C * GiCh;
  return GiCh * S.fullPivLu().solve(b);
}

struct RealConstraint {
  Eigen::MatrixXd Z;  // orthonormal null space basis, [2N x (2N - 2k)]
};

RealConstraint null_space(const Eigen::MatrixXcd& C) {
  const Eigen::Index k = C.rows(), N = C.cols();
  Eigen::MatrixXd R(2 * k, 2 * N);
  R << C.real(), -C.imag(), C.imag(), C.real();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(R.transpose());
  const Eigen::MatrixXd Q = qr.householderQ();
  return {Q.rightCols(2 * N - 2 * k)};
}

Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
  const Eigen::Index N = x.size() / 2;
  Eigen::VectorXcd u(N);
  for (Eigen::Index i = 0; i < N; ++i) u[i] = cplx(x[i], x[N + i]);
  return u;
}

Eigen::VectorXd to_real(const Eigen::VectorXcd& u) {
  const Eigen::Index N = u.size();
  Eigen::VectorXd x(2 * N);
  x.head(N) = u.real();
  x.tail(N) = u.imag();
  return x;
}

// Smoothed objective F = sum w (|f|^2 + eps^2)^{p/2}.
struct Smoothed {
  const LpSpace& space;
  double p;
  double eps2;

  double value(const Eigen::VectorXcd& f) const {
    const auto& rings = space.rule().rings;
    const std::size_t per = space.rule().nodes_per_ring();
    double total = 0.0;
    for (std::size_t k = 0; k < rings.size(); ++k) {
      double r = 0.0;
      for (std::size_t j = 0; j < per; ++j) r += std::pow(std::norm(f[k * per + j]) + eps2, p / 2.0);
      total += rings[k].weight * r;
    }
    return total;
  }

  void derivatives(const Eigen::VectorXcd& f, Eigen::VectorXd& grad, Eigen::MatrixXd* hess) const {
    const Eigen::Index n = f.size();
    Eigen::VectorXcd h(n);
    Eigen::VectorXd dP(hess ? n : 0);
    Eigen::VectorXcd dQ(hess ? n : 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = std::norm(f[i]);
      const double base = s + eps2;
      const double r1 = (p / 2.0) * std::pow(base, p / 2.0 - 1.0);
      h[i] = r1 * f[i];
      if (hess) {
        const double r2 = r1 * (p / 2.0 - 1.0) / base;
        dP[i] = r1 + r2 * s;
        dQ[i] = r2 * std::conj(f[i]) * std::conj(f[i]);
      }
    }
    const Eigen::VectorXcd g = 2.0 * space.op().analyze(h);
    grad = to_real(g);
    if (hess) {
      Eigen::MatrixXcd P, Q;
      space.op().hessian_blocks(dP, dQ, P, Q);
      const Eigen::Index N = P.rows();
      hess->resize(2 * N, 2 * N);
      hess->topLeftCorner(N, N) = 2.0 * (P.real() + Q.real());
      hess->topRightCorner(N, N) = 2.0 * (-P.imag() - Q.imag());
      hess->bottomLeftCorner(N, N) = 2.0 * (P.imag() - Q.imag());
      hess->bottomRightCorner(N, N) = 2.0 * (P.real() - Q.real());
      *hess = 0.5 * (*hess + hess->transpose()).eval();
    }
  }
};

struct StageResult {
  int iterations = 0;
  double kkt = 0.0;
  bool converged = false;
};

StageResult newton_stage(const LpSpace& space, double p, double eps, const Eigen::MatrixXd& Z, Eigen::VectorXd& x,
                         double tol, int max_iterations) {
  const Smoothed obj{space, p, eps * eps};
  StageResult res;
  Eigen::VectorXcd f = space.op().synthesize(to_complex(x));
  double F = obj.value(f);
  Eigen::VectorXd grad;
  Eigen::MatrixXd H;
  for (int it = 0; it < max_iterations; ++it) {
    obj.derivatives(f, grad, nullptr);
    const Eigen::VectorXd gz = Z.transpose() * grad;
    res.kkt = gz.norm() / (p * F);
    if (res.kkt <= tol) {
      res.converged = true;
      return res;
    }
    obj.derivatives(f, grad, &H);
    const Eigen::MatrixXd Hz = Z.transpose() * H * Z;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Hz);
    Eigen::VectorXd dy = -ldlt.solve(gz);
    double slope = gz.dot(dy);
    if (ldlt.info() != Eigen::Success || !dy.allFinite() || !(slope < 0.0)) {
      dy = -gz;
      slope = -gz.squaredNorm();
    }
    const Eigen::VectorXd dx = Z * dy;
    const Eigen::VectorXcd df = space.op().synthesize(to_complex(dx));
    ++res.iterations;
    if (-slope < 1e-12 * F) {
      // decrement below the resolution of F: judge the full step by the gradient
      const Eigen::VectorXcd ft = f + df;
      Eigen::VectorXd gt;
      obj.derivatives(ft, gt, nullptr);
      const double Ft = obj.value(ft);
      const double kt = (Z.transpose() * gt).norm() / (p * Ft);
      if (!(kt < res.kkt)) return res;
      x += dx;
      f = ft;
      F = Ft;
      continue;
    }
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXcd ft = f + t * df;
      const double Ft = obj.value(ft);
      if (Ft <= F + 1e-4 * t * slope) {
        x += t * dx;
        f = ft;
        F = Ft;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return res;  // floating-point floor reached
  }
  obj.derivatives(f, grad, nullptr);
  res.kkt = (Z.transpose() * grad).norm() / (p * F);
  res.converged = res.kkt <= tol;
  return res;
}

std::vector<double> continuation_path(double p) {
  std::vector<double> path;
  if (p < 1.5) {
    for (double t = 1.5; t > p + 1e-12 && t > 1.0 + 1.0 / 64.0 - 1e-12; t = 1.0 + (t - 1.0) / 2.0) path.push_back(t);
  } else if (p > 3.0) {
    path.push_back(3.0);
  }
  path.push_back(p);
  return path;
}

}  // namespace

Eigen::VectorXcd l2_start(const LpSpace& space, const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                          const std::vector<double>& weight) {
  return constrained_l2(gram_with_weight(space, weight), C, b);
}

ConstrainedMinimum minimize_lp(const LpSpace& space, double p, const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                               const SolverOptions& options, const Eigen::VectorXcd* warm) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("p must be >= 1");
  if (C.cols() != Eigen::Index(space.size()) || C.rows() != b.size() || C.rows() < 1)
    throw InvalidInput("constraint shape mismatch");
  if (space.condition() > options.condition_limit)
    throw IllConditioned("working Gram condition " + std::to_string(space.condition()) + " exceeds limit");

  Eigen::VectorXcd u0;
  if (warm && warm->size() == C.cols()) {
    // minimal-norm correction onto the affine slice
    const Eigen::VectorXcd r = b - C * (*warm);
    u0 = *warm + C.adjoint() * (C * C.adjoint()).fullPivLu().solve(r);
  } else {
    u0 = l2_start(space, C, b);
  }

  ConstrainedMinimum out;
  if (p == 2.0 && !warm) {
    out.u = u0;
  } else {
    const RealConstraint rc = null_space(C);
    Eigen::VectorXd x = to_real(u0);
    const double scale = space.op().synthesize(u0).cwiseAbs().maxCoeff();
    int iterations = 0;
    StageResult last;
    double eps = options.eps_schedule.back() * scale;
    if (warm) {
      // a nearby converged start usually needs only the final smoothing level
      const Eigen::VectorXd x0 = x;
      last = newton_stage(space, p, eps, rc.Z, x, options.tol, std::min(30, options.max_iterations));
      iterations += last.iterations;
      if (!last.converged) x = x0;
    }
    if (!last.converged) {
      const std::vector<double> path = warm ? std::vector<double>{p} : continuation_path(p);
      for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        const StageResult r = newton_stage(space, path[s], 1e-6 * scale, rc.Z, x, 1e-7, options.max_iterations);
        iterations += r.iterations;
      }
      for (double e : options.eps_schedule) {
        eps = e * scale;
        const bool final_stage = e == options.eps_schedule.back();
        last = newton_stage(space, p, eps, rc.Z, x, final_stage ? options.tol : std::max(options.tol, 1e-8),
                            options.max_iterations);
        iterations += last.iterations;
      }
    }
    if (!last.converged && !(last.kkt <= std::sqrt(options.tol)))
      throw SolverFailure("Newton iteration stalled at p = " + std::to_string(p) +
                          " with KKT residual " + std::to_string(last.kkt));
    out.u = to_complex(x);
    out.smoothing_eps = eps;
    out.iterations = iterations;
    out.kkt_residual = last.kkt;
  }
  out.objective = space.lp_power(out.u, p);
  return out;
}

// ---------------------------------------------------------------------------
// Extremal solutions

cplx ExtremalSolution::dual_density(const Point& zeta) const {
  const cplx m = minimizer(zeta);
  return std::pow(std::abs(m), p - 2.0) * m / std::pow(m_p_z, p);
}

ExtremalSolution solve_l2(SpacePtr space, const std::vector<double>& weight, const Point& z, double condition_limit) {
  space->require_interior(z);
  const Eigen::MatrixXcd G = gram_with_weight(*space, weight);
  const double cond = hermitian_condition(G);
  if (cond > condition_limit) throw IllConditioned("weighted Gram condition " + std::to_string(cond) + " exceeds limit");
  const Eigen::MatrixXcd C = space->row(z);
  const Eigen::VectorXcd b = Eigen::VectorXcd::Ones(1);
  ExtremalSolution sol;
  sol.space = space;
  sol.p = sol.q = 2.0;
  sol.z = z;
  sol.coefficients = constrained_l2(G, C, b);
  const double energy = (sol.coefficients.adjoint() * G * sol.coefficients)(0, 0).real();
  sol.m_p_z = std::sqrt(energy);
  sol.K_p_z = 1.0 / energy;
  sol.gram_condition = cond;
  return sol;
}

ExtremalSolution solve_min(SpacePtr space, double p, const Point& z, const SolverOptions& options,
                           const ExtremalSolution* warm) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("p must be >= 1");
  space->require_interior(z);
  ExtremalSolution sol;
  sol.space = space;
  sol.p = p;
  sol.q = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  sol.z = z;
  sol.gram_condition = space->condition();
  if (p == 2.0) {
    const ExtremalSolution l2 = solve_l2(space, {}, z, options.condition_limit);
    sol.coefficients = l2.coefficients;
    sol.m_p_z = l2.m_p_z;
    sol.K_p_z = l2.K_p_z;
    return sol;
  }
  const Eigen::MatrixXcd C = space->row(z);
  const Eigen::VectorXcd b = Eigen::VectorXcd::Ones(1);
  const Eigen::VectorXcd* w = (warm && warm->space == space) ? &warm->coefficients : nullptr;
  const ConstrainedMinimum r = minimize_lp(*space, p, C, b, options, w);
  sol.coefficients = r.u;
  sol.m_p_z = std::pow(r.objective, 1.0 / p);
  sol.K_p_z = 1.0 / r.objective;
  sol.smoothing_eps = r.smoothing_eps;
  sol.iterations = r.iterations;
  sol.kkt_residual = r.kkt_residual;
  return sol;
}

cplx off_diag(const ExtremalSolution& sol, const Point& zeta) {
  if (!sol.space->domain().contains(zeta))
    throw InvalidInput("point " + format_point(zeta, sol.space->domain().dimension()) + " is not inside the domain");
  return sol.kernel(zeta);
}

double reproducing_residual(const ExtremalSolution& sol, const Eigen::VectorXcd& test) {
  const LpSpace& space = *sol.space;
  const Eigen::VectorXcd m = sol.node_values();
  const Eigen::VectorXcd f = space.op().synthesize(test);
  const std::size_t per = space.rule().nodes_per_ring();
  const auto& rings = space.rule().rings;
  cplx integral = 0.0;
  for (std::size_t k = 0; k < rings.size(); ++k) {
    cplx r = 0.0;
    for (std::size_t j = 0; j < per; ++j) {
      const std::size_t i = k * per + j;
      const double am = std::abs(m[i]);
      const double weight = std::pow(am, sol.p - 2.0);
      if (!std::isfinite(weight))
        throw InvalidInput("weight |m_p|^(p-2) is not finite at node " + std::to_string(i));
      r += weight * std::conj(m[i] * sol.K_p_z) * f[i];
    }
    integral += rings[k].weight * r;
  }
  const cplx fz = space.evaluate(test, sol.z);
  return std::abs(fz - integral) / std::max(1.0, std::abs(fz));
}

DirectionalFunctional derivative_functional(SpacePtr space, double p, const Point& z, const Point& X,
                                            const SolverOptions& options, const DirectionalFunctional* warm) {
  if (!(p > 1.0)) throw InvalidInput("derivative functional requires p > 1");
  if (norm(X) == 0.0) throw InvalidInput("direction X must be nonzero");
  space->require_interior(z);
  const Eigen::MatrixXcd C = space->derivative_row(z, X);
  const Eigen::VectorXcd b = Eigen::VectorXcd::Ones(1);
  const Eigen::VectorXcd* w = warm && warm->coefficients.size() == C.cols() ? &warm->coefficients : nullptr;
  const ConstrainedMinimum r = minimize_lp(*space, p, C, b, options, w);
  DirectionalFunctional out;
  out.p = p;
  out.z = z;
  out.X = X;
  out.value = std::pow(r.objective, -1.0 / p);
  out.coefficients = r.u;
  out.iterations = r.iterations;
  out.kkt_residual = r.kkt_residual;
  return out;
}

Metrics metrics(const ExtremalSolution& sol, const Point& X, const SolverOptions& options) {
  const double p = sol.p;
  const DirectionalFunctional hat = derivative_functional(sol.space, p, sol.z, X, options);
  Eigen::MatrixXcd C(2, sol.space->size());
  C.row(0) = sol.space->row(sol.z);
  C.row(1) = sol.space->derivative_row(sol.z, X);
  Eigen::VectorXcd b(2);
  b << 0.0, 1.0;
  const ConstrainedMinimum r = minimize_lp(*sol.space, p, C, b, options);
  Metrics m;
  m.M_hat = hat.value;
  m.M_zero = std::pow(r.objective, -1.0 / p);
  const double factor = std::pow(sol.K_p_z, -1.0 / p);
  m.B_hat = factor * m.M_hat;
  m.B = factor * m.M_zero;
  return m;
}

}  // namespace pberg
