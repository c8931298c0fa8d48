#include "sads/potentials.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sads {

double cutoff_quartic(double r, const SpacetimeParams& p) {
  const double M = p.bh_mass;
  const double l2 = p.ads_radius * p.ads_radius;
  return r * r * r * (r / (4.0 * l2) - M / l2) - 0.25 * M * M;
}

double cutoff_quartic_root(const SpacetimeParams& p) {
  const double M = p.bh_mass;
  // g(4M) = -M^2/4 < 0 and g -> +inf, so the largest real root is > 4M.
  double lo = 4.0 * M;
  double hi = 4.0 * M + std::max(M, p.ads_radius);
  while (cutoff_quartic(hi, p) <= 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cutoff_quartic(mid, p) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Potentials::Potentials(const SpacetimeParams& p) : params_(p), map_(p) {
  double r_plus = cutoff_quartic_root(p);
  bool adjusted = false;
  // A^2 = F/r^2 peaks at the photon sphere r = 3M; A' < 0 on [x_plus, 0)
  // needs r_plus >= 3M.  The quartic root is always > 4M, so this is a
  // no-op safeguard kept for the contract.
  const double r_phot = 3.0 * p.bh_mass;
  if (r_plus < r_phot) {
    r_plus = r_phot * (1.0 + 1e-12);
    adjusted = true;
  }
  cutoff_ = InnerCutoff{r_plus, map_.x_of_r(r_plus), adjusted};
  a_sq_cutoff_ = at_radius(r_plus).A_sq;
}

Potentials::Point Potentials::at_rho(double rho) const {
  Point pt;
  pt.rho = rho;
  pt.r = map_.horizon().r_sads + rho;
  pt.x = map_.x_of_rho(rho);
  pt.F = map_.F_of_rho(rho);
  pt.F_dr = map_.F_dr_of_rho(rho);
  const double sqrtF = std::sqrt(pt.F);
  pt.A = sqrtF / pt.r;
  pt.B = sqrtF;
  // d/dx = F d/dr applied to F^{1/2}/r and F^{1/2}.
  pt.A_dx = sqrtF * (0.5 * pt.F_dr / pt.r - pt.F / (pt.r * pt.r));
  pt.B_dx = 0.5 * pt.F_dr * sqrtF;
  pt.A_sq = pt.F / (pt.r * pt.r);
  pt.A_sq_dx = pt.F * (pt.F_dr * pt.r - 2.0 * pt.F) / (pt.r * pt.r * pt.r);
  return pt;
}

Potentials::Point Potentials::at(double x) const {
  if (!(x < 0.0)) throw std::domain_error("Potentials: x must be < 0");
  return at_rho(map_.rho_of_x(x));
}

Potentials::Point Potentials::at_radius(double r) const {
  return at_rho(r - map_.horizon().r_sads);
}

std::pair<double, double> Potentials::derivatives(double x) const {
  const Point pt = at(x);
  return {pt.A_dx, pt.B_dx};
}

double Potentials::turning_point_xA(double E) const {
  const double l = params_.ads_radius;
  const double floor_E = 1.0 / (l * l);
  if (!(E > floor_E))
    throw std::domain_error("turning_point_xA: E <= 1/l^2, no turning point");
  if (!(E < a_sq_cutoff_))
    throw std::domain_error(
        "turning_point_xA: E >= A^2(x_plus), energy exceeds the barrier");
  // Scan from the right for the first sign change of A^2 - E; A^2 -> 1/l^2
  // at 0 and A^2(x_plus) > E, so a bracket exists.
  const double x_right = -1e-12 * l;
  const double x_left = cutoff_.x_plus;
  const int n_seg = 64;
  double hi = x_right;
  double f_hi = at(hi).A_sq - E;  // < 0 near 0
  double lo = hi;
  for (int i = 1; i <= n_seg; ++i) {
    lo = x_right + (x_left - x_right) * static_cast<double>(i) / n_seg;
    const double f_lo = at(lo).A_sq - E;
    if (f_lo * f_hi <= 0.0) break;
    hi = lo;
    f_hi = f_lo;
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, -lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    ((at(mid).A_sq - E) * f_hi <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double potential_A(double x, const SpacetimeParams& p) {
  return Potentials(p).A(x);
}

double potential_B(double x, const SpacetimeParams& p) {
  return Potentials(p).B(x);
}

std::pair<double, double> potential_derivatives(double x, const SpacetimeParams& p) {
  return Potentials(p).derivatives(x);
}

double turning_point_xA(double E, const SpacetimeParams& p) {
  return Potentials(p).turning_point_xA(E);
}

InnerCutoff inner_cutoff_x_plus(const SpacetimeParams& p) {
  return Potentials(p).cutoff();
}

}  // namespace sads
