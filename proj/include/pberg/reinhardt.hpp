#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pberg/extremal.hpp"

namespace pberg {

/// Moments c_alpha = int |zeta^alpha|^2 of a complete Reinhardt model
/// domain and the truncated series K_2(zeta, z) = sum zeta^alpha conj(z)^alpha / c_alpha.
class MomentTable {
 public:
  MomentTable(const Domain& domain, int degree);

  const Domain& domain() const { return domain_; }
  int degree() const { return degree_; }
  int dimension() const { return domain_.dimension(); }
  double moment(const MultiIndex& alpha) const;

  struct Value {
    cplx kernel;
    double tail_bound = 0.0;  // geometric estimate of the truncation error
    bool tail_valid = true;   // false when the graded terms do not decay
  };
  Value evaluate(const Point& zeta, const Point& z) const;
  cplx kernel(const Point& zeta, const Point& z) const { return evaluate(zeta, z).kernel; }
  /// m_2(zeta, z) = K_2(zeta, z) / K_2(z, z).
  cplx minimizer(const Point& zeta, const Point& z) const;

  /// Coefficients of zeta_j -> K_2(zeta, z) with the other coordinate fixed.
  Eigen::VectorXcd slice_polynomial(int j, const Point& zeta, const Point& z) const;

 private:
  Domain domain_;
  int degree_;
  std::vector<std::vector<double>> c_;  // c_[a1][a2]
};

MomentTable k2_series(const Domain& domain, int degree);

enum class ZeroVerdict { zero_free, has_zero, inconclusive };
std::string to_string(ZeroVerdict v);

struct ZeroClassification {
  Point z{};
  ZeroVerdict verdict = ZeroVerdict::inconclusive;
  Point witness{};
  double min_modulus = 0.0;  // over the search grid, relative to K_2(z, z)
  double max_tail = 0.0;     // largest tail bound met on the search grid, same units
  int winding = 0;           // certified winding number at the witness when has_zero
  std::optional<int> k0;
  std::string diagnostic;
};

/// Search over 1-d slices: roots of the slice polynomials inside the domain
/// are certified by a winding number on a small circle with the tail bound
/// below the modulus on the circle.
ZeroClassification classify(const MomentTable& series, const Point& z, int search_budget = 400,
                            double margin = 0.05);

struct WindingResult {
  int order = 0;
  double raw = 0.0;  // total argument change / 2 pi before rounding
  double min_modulus = 0.0;
  double radius = 0.0;
  int retries = 0;
};

/// Winding number of f around the circle |t - center| = radius, with
/// adaptive subdivision keeping every argument step below pi / 8.
/// Throws InvalidInput when f vanishes (numerically) on the circle.
WindingResult winding_number(const std::function<cplx(cplx)>& f, cplx center, double radius);

/// Argument principle order; a zero on the circle triggers retries with a
/// perturbed radius (up to 5 times).
WindingResult zero_order(const std::function<cplx(cplx)>& f, cplx center, double radius);

/// Order of m_2(., z0) at zeta0 along the complex line zeta0 + t v.
WindingResult zero_order(const MomentTable& series, const Point& z0, const Point& zeta0, const Point& v,
                         double radius);

struct MpkEntry {
  int k = 1;
  bool converged = false;
  double sup_deviation = 0.0;  // sup_probe |m_2 - m_{2k}^k|
  std::string diagnostic;
};

struct MpkReport {
  Point z0{};
  bool gate_passed = false;
  std::string gate_diagnostic;
  std::vector<MpkEntry> entries;
  int largest_converged_k = 0;
};

/// m_2(., z0) against m_{2k}(., z0)^k for k = 1..k_max, gated on m_2 being
/// zero-free on the nodes.
MpkReport mpk_probe(SpacePtr space, int k_max, const Point& z0, const std::vector<Point>& probe,
                    const SolverOptions& options = {});

struct BoundaryExperiment {
  std::string profile;
  Point direction{};
  std::vector<double> s_grid;
  std::vector<ZeroVerdict> verdicts;
  std::size_t closedness_anomalies = 0;  // zero_free points flanked by has_zero
  bool transition_found = false;
  Point z0{};
  Point zeta0{};
  Point normal{};
  std::optional<int> k0;
  std::vector<int> k_values;
  std::vector<double> growth_exponent;  // fitted exponent of |m_2|^{1/k} along the normal
  std::string diagnostic;
};

/// Scans z = s u, bisects the first zero_free -> has_zero transition and,
/// at the limit zero on the boundary, records k0 and the growth exponents.
/// Exploratory only.
BoundaryExperiment boundary_experiment(const MomentTable& series, const Point& direction, double s_max, int steps,
                                       const std::vector<int>& k_values);

}  // namespace pberg
