#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pberg/types.hpp"

namespace pberg {

enum class InequalityId {
  p_leq2,
  p_geq2_half,
  p_geq2_power,
  lower_leq2,
  lower_geq2,
  lower_q1,
  diff_leq2,
  diff_geq2,
  geq1,
  elementary_power,
};

inline constexpr std::array<InequalityId, 10> all_inequalities{
    InequalityId::p_leq2,     InequalityId::p_geq2_half, InequalityId::p_geq2_power, InequalityId::lower_leq2,
    InequalityId::lower_geq2, InequalityId::lower_q1,    InequalityId::diff_leq2,    InequalityId::diff_geq2,
    InequalityId::geq1,       InequalityId::elementary_power};

std::string to_string(InequalityId id);
InequalityId parse_inequality(const std::string& name);
/// Whether q lies in the validity range of the inequality.
bool in_range(InequalityId id, double q);

/// Exact infimum of the admissible constant in the q = 1 lower bound.
inline constexpr double B1_exact = 27.0 / 8.0;

struct InequalityCase {
  InequalityId id{};
  cplx a, b;
  double q = 2.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // >= 0 means the inequality holds
  double scale = 1.0;   // max(|a|, |b|, 1)^q
  bool degenerate = false;
};

/// Signed slack of one inequality. `B1` is used only by lower_q1.
InequalityCase check_inequality(InequalityId id, cplx a, cplx b, double q, double B1 = B1_exact);

struct B1Estimate {
  double value = 0.0;
  std::size_t samples = 0;
  cplx a, b;  // minimizing configuration
};

/// Largest B1 for which the q = 1 bound held on sampled (a, b), refined
/// by a local search around the best sample.
B1Estimate estimate_B1(std::size_t budget, std::uint64_t seed = 1);

struct ExpansionReport {
  cplx a, b;
  double q = 3.0;
  std::array<double, 4> terms{};
  double remainder = 0.0;
  /// Remainder recomputed from the integral form of the Taylor remainder.
  double remainder_integral = 0.0;
  double bound = 0.0;
  double scale = 1.0;
  double identity_error = 0.0;
};

ExpansionReport expand_q(cplx a, cplx b, double q);

/// Random (a, b) pairs: log-uniform moduli in [1e-3, 1e3], uniform phases,
/// mixed with near-degenerate families.
class PairSampler {
 public:
  explicit PairSampler(std::uint64_t seed);
  std::pair<cplx, cplx> next();

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  double uniform() { return unit_(rng_); }
};

struct SweepResult {
  InequalityId id{};
  double q = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t degenerate = 0;
  double worst_margin = 0.0;  // min margin / scale
  cplx worst_a, worst_b;
};

SweepResult sweep_inequality(InequalityId id, double q, std::size_t samples, std::uint64_t seed, double B1,
                             double tol = 1e-12);

struct ExpansionSweep {
  double q = 0.0;
  std::size_t samples = 0;
  double max_identity_error = 0.0;  // relative to scale
  std::size_t envelope_violations = 0;
  double max_ratio = 0.0;           // |R| / bound
};

ExpansionSweep sweep_expansion(double q, std::size_t samples, std::uint64_t seed);

/// q-grid {1, 1.25, ..., 4}.
std::vector<double> default_q_grid();

}  // namespace pberg
