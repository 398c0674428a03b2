#pragma once

// Closed forms used as test oracles. Written from the change of variables
// on the disc and the product structure of the bidisc; nothing here calls
// into the library.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

// Disc of radius R: K_p(z) = R^2 / (pi (R^2 - |z|^2)^2) for every p >= 1.
inline double disc_K(cplx z, double R = 1.0) {
  const double s = 1.0 - std::norm(z / R);
  return 1.0 / (pi * R * R * s * s);
}

// m_p(zeta, z) = ((1 - |z|^2) / (1 - conj(z) zeta))^{4/p} on the unit disc.
inline cplx disc_m(double p, cplx zeta, cplx z) {
  return std::pow((1.0 - std::norm(z)) / (1.0 - std::conj(z) * zeta), 4.0 / p);
}

inline cplx disc_K_offdiag(double p, cplx zeta, cplx z) { return disc_m(p, zeta, z) * disc_K(z); }

// d/dx and d/dy of the unit-disc kernel.
inline std::array<double, 2> disc_grad(cplx z) {
  const double s = 1.0 - std::norm(z);
  const double c = 4.0 / (pi * s * s * s);
  return {c * z.real(), c * z.imag()};
}

// Levi form (d dbar) of log K on the unit disc.
inline double disc_levi_logK(cplx z) {
  const double s = 1.0 - std::norm(z);
  return 2.0 / (s * s);
}

inline double bidisc_K(cplx z1, cplx z2) { return disc_K(z1) * disc_K(z2); }

inline cplx bidisc_m(double p, cplx w1, cplx w2, cplx z1, cplx z2) { return disc_m(p, w1, z1) * disc_m(p, w2, z2); }

// Unit ball in C^2: K_2(zeta, z) = 2 / (pi^2 (1 - <zeta, z>)^3).
inline cplx ball_K2(cplx w1, cplx w2, cplx z1, cplx z2) {
  const cplx s = 1.0 - w1 * std::conj(z1) - w2 * std::conj(z2);
  return 2.0 / (pi * pi * s * s * s);
}

inline double factorial(int k) { return std::tgamma(k + 1.0); }

// Moments int |zeta^alpha|^2.
inline double disc_moment(int k, double R = 1.0) { return pi * std::pow(R, 2 * k + 2) / (k + 1); }
inline double bidisc_moment(int a, int b) { return disc_moment(a) * disc_moment(b); }
inline double ball_moment(int a, int b) { return pi * pi * factorial(a) * factorial(b) / factorial(a + b + 2); }

// Weighted disc kernel for the weight (1 - |zeta|^2)^a.
inline double disc_weighted_K(double a, cplx z) {
  return (a + 1.0) / (pi * std::pow(1.0 - std::norm(z), 2.0 + a));
}

// Sum over orthonormal phi_k = sqrt((k+1)/pi) zeta^k of |phi_k'(z)|^2.
inline double disc_derivative_kernel(cplx z, int terms = 400) {
  double s = 0.0;
  for (int k = 1; k < terms; ++k) s += (k + 1.0) * k * k * std::pow(std::norm(z), k - 1) / pi;
  return s;
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(g); }
  cplx in_disc(double r) {
    const double rho = r * std::sqrt(uniform());
    return std::polar(rho, uniform(0.0, 2.0 * pi));
  }
  cplx complex_normal() {
    std::normal_distribution<double> n;
    return {n(g), n(g)};
  }
};

}  // namespace oracle
