#pragma once

#include <stdexcept>
#include <string>

namespace sads {

/// Physical parameters of the Schwarzschild-anti-de Sitter background plus
/// the semiclassical parameter h.  Geometric units; the AdS radius l sets
/// the length scale.  Everything downstream (horizon, tortoise map,
/// potentials, operators) hangs off one of these.
struct SpacetimeParams {
  double bh_mass;     // M > 0
  double ads_radius;  // l > 0
  double field_mass;  // m > 0, with m*l > 1 (natural operator domain)
  double h;           // semiclassical parameter, h > 0

  SpacetimeParams(double M, double l, double m, double h_)
      : bh_mass(M), ads_radius(l), field_mass(m), h(h_) {
    if (!(M > 0.0)) throw std::domain_error("SpacetimeParams: M must be > 0");
    if (!(l > 0.0)) throw std::domain_error("SpacetimeParams: l must be > 0");
    if (!(m > 0.0)) throw std::domain_error("SpacetimeParams: m must be > 0");
    if (!(h_ > 0.0)) throw std::domain_error("SpacetimeParams: h must be > 0");
    if (!(m * l > 1.0))
      throw std::domain_error("SpacetimeParams: require m*l > 1, got m*l = " +
                              std::to_string(m * l));
  }

  double ml() const { return field_mass * ads_radius; }

  /// Same background, different h.
  SpacetimeParams with_h(double h_new) const {
    return SpacetimeParams(bh_mass, ads_radius, field_mass, h_new);
  }
};

}  // namespace sads
