#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pberg/extremal.hpp"

namespace pberg {

/// Kernel-value and integral forms of the symmetric energy H_p(z, z').
struct HatH {
  double kernel_form = 0.0;
  double integral_form = 0.0;
  double scale = 1.0;  // K_p(z)^{p-1} + K_p(z')^{p-1}
  double relative_gap() const { return std::abs(kernel_form - integral_form) / scale; }
};

HatH hat_H(const ExtremalSolution& at_z, const ExtremalSolution& at_zp);

struct LemmaMargin {
  std::string name;  // "q1_imaginary", "leq2_weighted", "geq2_weighted", "geq2_power"
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double scale = 1.0;
};

/// The applicable integrated lower bounds of H_p for the exponent of the
/// two solutions.
std::vector<LemmaMargin> lemma31_check(const ExtremalSolution& at_z, const ExtremalSolution& at_zp);

/// ||K_p(., z) - K_p(., z')||_p.
double kernel_difference_norm(const ExtremalSolution& at_z, const ExtremalSolution& at_zp);

/// max over pairs of H_p / (|z - z'| ||K_p(., z) - K_p(., z')||_p).
double prop32_ratio(const std::vector<ExtremalSolution>& solutions);

struct GradientCheck {
  double p = 2.0;
  Point z{};
  double h = 0.0;
  std::vector<double> fd;        // central differences, step h
  std::vector<double> fd_half;   // step h / 2
  std::vector<double> analytic;  // p Re / -p Im of K(z) d_j m(z)
  double scale = 1.0;            // max(|analytic|_2, K_p(z))
  double deviation = 0.0;        // max_j |fd - analytic| / scale
  double deviation_half = 0.0;
  double self_consistency = 0.0;  // max_j |fd - fd_half| / scale
};

/// Analytic gradient of K_p at z from the extremal solution, real
/// coordinates x_1..x_n, y_1..y_n.
std::vector<double> analytic_gradient(const ExtremalSolution& sol);

GradientCheck gradient_identity(SpacePtr space, double p, const Point& z, const SolverOptions& options = {},
                                const ExtremalSolution* center = nullptr);

struct HolderFit {
  double alpha_hat = 0.0;
  double stderr_alpha = 0.0;
  std::size_t used = 0;
  std::size_t total = 0;
  double decades = 0.0;
};

/// Least-squares slope of log(difference) against log(distance) over the
/// pairs whose difference exceeds `noise_floor`.
HolderFit holder_fit(const std::vector<double>& distance, const std::vector<double>& difference,
                     double noise_floor);

/// Theorem target alpha(p): 1 for 1 < p <= 2, p / (2p - 2) for p > 2.
double holder_target(double p);

struct HolderSamples {
  std::vector<double> distance;
  std::vector<double> gradient_difference;  // |grad K(z) - grad K(z')|
  std::vector<double> kernel_difference;    // |K(zeta, z) - K(zeta, z')|
};

/// Pairs (z0, z0 + t v) with t log-spaced over [t_min, t_max], sharing the
/// base point; each point costs one solve.
HolderSamples holder_samples(SpacePtr space, double p, const Point& z0, const Point& v, const Point& zeta,
                             double t_min, double t_max, int count, const SolverOptions& options = {});

struct LeviSample {
  double p = 2.0;
  Point z{};
  Point X{};
  std::vector<double> radii;
  std::vector<double> T;       // T_r log K_p at each radius
  double lhs = 0.0;            // Richardson extrapolated Levi form
  double B_hat = 0.0;
  double XK_over_K = 0.0;      // |X K_p| / K_p
  double rhs = 0.0;
  double margin = 0.0;         // rhs - lhs
  double scale = 1.0;
  bool converged = true;
};

LeviSample levi_check(SpacePtr space, double p, const Point& z, const Point& X, double r,
                      const SolverOptions& options = {}, int angles = 8);

struct SweepRow {
  double t = 0.0;
  double K = 0.0;
  double normalized = 0.0;  // (|Omega| K_t)^{1/t}
};

struct PSweep {
  Point z{};
  std::vector<SweepRow> rows;
  double monotonicity_margin = 0.0;  // min over neighbours of (prev - next) / prev
  double target_p = 2.0;
  double modulus_ratio = 0.0;        // max |K_s - K_p| / (|s-p| |log|s-p||)
  double truncation = 0.0;           // |K_p| change from degree d-2 to d
  double noise_ratio = 0.0;          // same with |K_s - K_p| replaced by the noise floor
};

PSweep p_sweep(SpacePtr space, const Point& z, const std::vector<double>& t_grid, double target_p,
               const SolverOptions& options = {});

struct K1Probe {
  std::vector<double> p;
  std::vector<double> K;
  std::vector<double> K_differences;        // |K_{p_k} - K_{p_{k+1}}| / K
  std::vector<double> minimizer_sup_diffs;  // sup over probe grid |m_{p_k} - m_{p_{k+1}}|
  bool monotone_shrinking = true;
};

K1Probe k1_limit_probe(SpacePtr space, const Point& z, const std::vector<double>& p_sequence,
                       const std::vector<Point>& probe, const SolverOptions& options = {});

struct BorelCaratheodory {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // min (rhs - lhs) / max(rhs, 1)
};

/// Random polynomials h on discs D_R, radii r < R.
BorelCaratheodory borel_caratheodory_suite(std::size_t samples, std::uint64_t seed, int boundary_points = 2048);

/// Single evaluation for a given polynomial (coefficients c_k of zeta^k).
double borel_caratheodory_margin(const std::vector<cplx>& coefficients, double r, double R, int boundary_points);

}  // namespace pberg
