#include "sads/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sads {

double metric_F(double r, const SpacetimeParams& p) {
  if (!(r > 0.0)) throw std::domain_error("metric_F: r must be > 0");
  const double l = p.ads_radius;
  return 1.0 - 2.0 * p.bh_mass / r + r * r / (l * l);
}

double metric_F_dr(double r, const SpacetimeParams& p) {
  if (!(r > 0.0)) throw std::domain_error("metric_F_dr: r must be > 0");
  const double l = p.ads_radius;
  return 2.0 * p.bh_mass / (r * r) + 2.0 * r / (l * l);
}

HorizonData horizon_radius(const SpacetimeParams& p) {
  const double M = p.bh_mass;
  const double l = p.ads_radius;
  const double l2 = l * l;
  // s = sqrt(M^2 l^4 + l^6/27) > M l^2, so the p_minus argument is negative.
  const double s = std::sqrt(M * M * l2 * l2 + l2 * l2 * l2 / 27.0);
  const double p_plus = std::cbrt(M * l2 + s);
  // s - M l^2 rationalized: (l^6/27) / (s + M l^2).
  const double neg_arg = (l2 * l2 * l2 / 27.0) / (s + M * l2);
  const double p_minus = -std::cbrt(neg_arg);
  return HorizonData{p_plus + p_minus, p_plus, p_minus};
}

TortoiseMap::TortoiseMap(const SpacetimeParams& p)
    : params_(p), horizon_(horizon_radius(p)) {
  const double l2 = p.ads_radius * p.ads_radius;
  const double rs = horizon_.r_sads;
  q_ = l2 + rs * rs;
  w_ = std::sqrt(4.0 * l2 + 3.0 * rs * rs);
  // 1/F = alpha/(r - rs) + (-alpha*r + gamma)/(r^2 + rs*r + q),
  // alpha = 1/F'(rs), gamma = alpha*q/rs.
  alpha_ = l2 * rs / (3.0 * rs * rs + l2);
  delta_ = alpha_ * (l2 + 1.5 * rs * rs) / rs;
  g0_ = -0.5 * alpha_ * std::log(3.0 * rs * rs + l2) +
        delta_ * (2.0 / w_) *
            (std::atan(3.0 * rs / w_) - std::numbers::pi / 2.0);
}

double TortoiseMap::F_of_rho(double rho) const {
  const double rs = horizon_.r_sads;
  const double l2 = params_.ads_radius * params_.ads_radius;
  // F(rs + rho) = rho * (3 rs^2 + l^2 + 3 rs rho + rho^2) / (l^2 (rs + rho))
  return rho * (3.0 * rs * rs + l2 + rho * (3.0 * rs + rho)) /
         (l2 * (rs + rho));
}

double TortoiseMap::F_dr_of_rho(double rho) const {
  const double r = horizon_.r_sads + rho;
  return metric_F_dr(r, params_);
}

double TortoiseMap::x_of_rho(double rho) const {
  if (!(rho > 0.0))
    throw std::domain_error("TortoiseMap: r must be > r_sads (x -> -inf)");
  const double rs = horizon_.r_sads;
  const double r = rs + rho;
  const double quad = r * r + rs * r + q_;
  return alpha_ * (std::log(rho) - 0.5 * std::log(quad)) +
         delta_ * (2.0 / w_) *
             (std::atan((2.0 * r + rs) / w_) - std::numbers::pi / 2.0);
}

double TortoiseMap::x_of_r(double r) const { return x_of_rho(r - horizon_.r_sads); }

double TortoiseMap::rho_of_x(double x) const {
  if (!(x < 0.0)) throw std::domain_error("TortoiseMap: x must be < 0");
  const double l2 = params_.ads_radius * params_.ads_radius;
  // Bisect in u = ln(rho); x_of_rho(e^u) is strictly increasing, with
  // asymptotes alpha*u + g0 (u -> -inf) and -l^2/rho (rho -> inf).
  double u_lo = std::min((x - g0_) / alpha_, std::log(horizon_.r_sads)) - 2.0;
  double u_hi = std::max(std::log(2.0 * (l2 + q_) / -x),
                         std::log(10.0 * horizon_.r_sads)) + 2.0;
  while (x_of_rho(std::exp(u_lo)) >= x) u_lo -= 2.0;
  while (x_of_rho(std::exp(u_hi)) <= x) u_hi += 2.0;
  for (int it = 0; it < 200 && u_hi - u_lo > 1e-15; ++it) {
    const double u_mid = 0.5 * (u_lo + u_hi);
    (x_of_rho(std::exp(u_mid)) < x ? u_lo : u_hi) = u_mid;
  }
  // Newton polish on rho (dx/drho = 1/F), bracket-guarded.
  double rho = std::exp(0.5 * (u_lo + u_hi));
  for (int it = 0; it < 6; ++it) {
    const double fx = x_of_rho(rho) - x;
    const double step = -fx * F_of_rho(rho);
    const double next = rho + step;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    rho = next;
  }
  return rho;
}

double TortoiseMap::r_of_x(double x) const { return horizon_.r_sads + rho_of_x(x); }

double tortoise_from_radius(double r, const SpacetimeParams& p) {
  return TortoiseMap(p).x_of_r(r);
}

double radius_from_tortoise(double x, const SpacetimeParams& p) {
  return TortoiseMap(p).r_of_x(x);
}

}  // namespace sads
