#pragma once

#include "sads/params.hpp"

namespace sads {

/// Horizon data for F(r) = 1 - 2M/r + r^2/l^2.  F has exactly one real
/// root r_sads = p_plus + p_minus on (0, inf).
struct HorizonData {
  double r_sads;
  double p_plus;
  double p_minus;
};

/// Metric lapse F(r).  Throws std::domain_error for r <= 0.
double metric_F(double r, const SpacetimeParams& p);

/// F'(r) = 2M/r^2 + 2r/l^2.
double metric_F_dr(double r, const SpacetimeParams& p);

/// Real-cube-root evaluation of p_plus + p_minus.  The negative cube-root
/// argument of p_minus is rationalized to avoid cancellation.
HorizonData horizon_radius(const SpacetimeParams& p);

/// Tortoise coordinate x(r) with dx/dr = 1/F and x -> 0 as r -> inf,
/// evaluated from the exact antiderivative of the partial-fraction
/// decomposition of 1/F.  The map keeps r - r_sads as its internal
/// variable so the log-divergent horizon end stays accurate far beyond
/// where r itself can represent the offset.
class TortoiseMap {
 public:
  explicit TortoiseMap(const SpacetimeParams& p);

  /// x(r).  Throws std::domain_error unless r > r_sads.
  double x_of_r(double r) const;

  /// x as a function of rho = r - r_sads > 0 (no subtraction loss).
  double x_of_rho(double rho) const;

  /// Inverse map.  Throws std::domain_error unless x < 0.  Roundtrip
  /// |x_of_r(r_of_x(x)) - x| < 1e-9 * max(1, |x|).
  double r_of_x(double x) const;

  /// rho = r - r_sads for the given tortoise x; usable where r_of_x
  /// would round to r_sads.
  double rho_of_x(double x) const;

  /// F and F' evaluated through rho (exact near the horizon).
  double F_of_rho(double rho) const;
  double F_dr_of_rho(double rho) const;

  const HorizonData& horizon() const { return horizon_; }
  const SpacetimeParams& params() const { return params_; }

  /// F'(r_sads); twice the surface gravity.  The horizon-side asymptote is
  /// x ~ ln(rho)/F'(r_sads) + const.
  double F_dr_at_horizon() const { return 1.0 / alpha_; }

  /// Additive constant of the horizon asymptote: x = alpha*ln(rho) + G0 + O(rho).
  double horizon_offset() const { return g0_; }

 private:
  SpacetimeParams params_;
  HorizonData horizon_;
  double q_;      // l^2 + r_sads^2 (quadratic cofactor constant)
  double w_;      // sqrt(4 l^2 + 3 r_sads^2)
  double alpha_;  // 1/F'(r_sads)
  double delta_;  // alpha * (l^2 + 1.5 r_sads^2) / r_sads
  double g0_;
};

/// One-shot conveniences; construct a TortoiseMap for repeated use.
double tortoise_from_radius(double r, const SpacetimeParams& p);
double radius_from_tortoise(double x, const SpacetimeParams& p);

}  // namespace sads
