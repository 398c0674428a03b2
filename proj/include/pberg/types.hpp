#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace pberg {

using cplx = std::complex<double>;

/// A point (or complex tangent vector) of C^n, n <= 2. Coordinates beyond
/// the domain dimension are kept at zero.
using Point = std::array<cplx, 2>;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(cplx s, const Point& a) { return {s * a[0], s * a[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

inline double norm(const Point& a) { return std::sqrt(std::norm(a[0]) + std::norm(a[1])); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

/// Real coordinate j (0-based) of the identification C^n = R^{2n},
/// z_k = x_k + i x_{n+k}.
Point real_unit_vector(int n, int j);

std::string format_point(const Point& z, int n);

/// Violated precondition or malformed input.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ill-conditioned linear algebra (Gram condition above the abort threshold).
class IllConditioned : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The convex solver failed to reach its KKT tolerance.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pberg
