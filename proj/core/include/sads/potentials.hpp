#pragma once

#include "sads/geometry.hpp"
#include "sads/params.hpp"

#include <vector>

namespace sads {

/// Left endpoint of the working interval: smallest r_plus > r_sads with
/// 1/(4l^2) - M/(r l^2) - M^2/(4 r^4) >= 0 for all r >= r_plus, i.e. the
/// largest real root of g(r) = r^4/(4l^2) - M r^3/l^2 - M^2/4, possibly
/// pushed right until A' < 0 holds on [x_plus, 0).
struct InnerCutoff {
  double r_plus;
  double x_plus;
  bool adjusted;  // true if the A' sign condition moved the raw root
};

/// Scalar potentials A(x) = F^{1/2}/r and B(x) = F^{1/2} of the reduced
/// radial operator, with x-derivatives taken analytically through
/// d/dx = F d/dr.  All evaluations route through the tortoise map's
/// rho = r - r_sads representation, so the exponential horizon tail is
/// computed without subtraction loss arbitrarily deep.
class Potentials {
 public:
  explicit Potentials(const SpacetimeParams& p);

  struct Point {
    double x, r, rho, F, F_dr;
    double A, B, A_dx, B_dx, A_sq, A_sq_dx;
  };

  /// Full bundle at tortoise x < 0 (one inverse-map solve).
  Point at(double x) const;

  double A(double x) const { return at(x).A; }
  double B(double x) const { return at(x).B; }
  double A_sq(double x) const { return at(x).A_sq; }
  /// (A'(x), B'(x)).
  std::pair<double, double> derivatives(double x) const;

  /// Well-side turning point: the root of A^2(x) = E nearest 0.
  /// Throws std::domain_error if E <= 1/l^2 (no turning point) or
  /// E >= A^2(x_plus) (energy exceeds the barrier at the cutoff).
  double turning_point_xA(double E) const;

  const InnerCutoff& cutoff() const { return cutoff_; }
  const TortoiseMap& map() const { return map_; }
  const SpacetimeParams& params() const { return params_; }

  /// A^2 at the inner cutoff (barrier value bounding admissible energies).
  double A_sq_at_cutoff() const { return a_sq_cutoff_; }

  Point at_radius(double r) const;

 private:
  Point at_rho(double rho) const;

  SpacetimeParams params_;
  TortoiseMap map_;
  InnerCutoff cutoff_;
  double a_sq_cutoff_;
};

/// Spec-shaped conveniences (each builds a map; prefer Potentials for loops).
double potential_A(double x, const SpacetimeParams& p);
double potential_B(double x, const SpacetimeParams& p);
std::pair<double, double> potential_derivatives(double x, const SpacetimeParams& p);
double turning_point_xA(double E, const SpacetimeParams& p);
InnerCutoff inner_cutoff_x_plus(const SpacetimeParams& p);

/// Largest real root of g(r) = r^4/(4l^2) - M r^3/l^2 - M^2/4.
double cutoff_quartic_root(const SpacetimeParams& p);
double cutoff_quartic(double r, const SpacetimeParams& p);

}  // namespace sads
