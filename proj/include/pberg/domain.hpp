#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pberg/types.hpp"

namespace pberg {

/// Radial bound r2 = g(r1) of a complete Reinhardt domain in C^2,
/// {(z1, z2) : |z1| < R1, |z2| < g(|z1|)}.
///
/// Two families are supported: the analytic lp profiles
/// g(r) = (1 - r^t)^{1/t} on [0, 1] (t = 2 is the unit ball, t = 1 the
/// l1 ball), and tabulated (r, g) pairs interpolated monotone-cubically.
class RadialProfile {
 public:
  static RadialProfile lp(double exponent);
  static RadialProfile tabulated(std::vector<double> r, std::vector<double> g);

  double operator()(double r1) const;
  double derivative(double r1) const;
  /// End R1 of the support [0, R1].
  double support() const { return support_; }
  /// g(0), the largest admissible |z2|.
  double sup() const { return (*this)(0.0); }
  /// Fiber radius sup{r1 : g(r1) > s}.
  double fiber_radius(double s) const;
  const std::string& name() const { return name_; }
  bool analytic() const { return analytic_; }
  double exponent() const { return exponent_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::string name_;
  bool analytic_ = true;
  double exponent_ = 2.0;
  double support_ = 1.0;
  std::vector<double> knots_, values_;
  std::shared_ptr<std::function<double(double)>> interp_, interp_deriv_;
};

enum class DomainKind { unit_disc, disc, bidisc, ball2, reinhardt_radial };

struct DomainDescriptor {
  DomainKind kind = DomainKind::unit_disc;
  double radius = 1.0;
  std::optional<RadialProfile> profile;
};

/// Parses "unit_disc", "disc:<R>", "bidisc", "ball2", "reinhardt:lp:<t>",
/// "reinhardt:ball2".
DomainDescriptor parse_descriptor(const std::string& text);

class Domain {
 public:
  DomainKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double volume() const { return volume_; }
  bool simply_connected() const { return true; }
  bool complete_reinhardt() const { return true; }
  /// Radius of the disc factor(s); 1 for the unit ball.
  double radius() const { return radius_; }
  const RadialProfile* profile() const { return profile_ ? &*profile_ : nullptr; }
  std::string name() const;

  bool contains(const Point& z) const;
  /// Fiber radius in the first coordinate above |z2| = s.
  double fiber_radius(double s) const;

 private:
  friend Domain make_domain(const DomainDescriptor&);
  DomainKind kind_ = DomainKind::unit_disc;
  int dimension_ = 1;
  double radius_ = 1.0;
  double volume_ = 0.0;
  std::optional<RadialProfile> profile_;
};

Domain make_domain(const DomainDescriptor& descriptor);

/// Euclidean distance from a point of the closure to the boundary.
double boundary_distance(const Domain& domain, const Point& z);

}  // namespace pberg
