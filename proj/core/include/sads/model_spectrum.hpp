#pragma once

#include "sads/eigensolve.hpp"
#include "sads/grid.hpp"
#include "sads/operators.hpp"
#include "sads/params.hpp"

#include <vector>

namespace sads {

/// Closed-form levels of the confining model operator:
///   E0 = 1/l^2 - h/2,
///   E1 = 1/l^2 + (2 ml + 1) w h,   E2 = 1/l^2 + (2 a1 + 1) w h,
/// with w = sqrt(1/l^4 + h/(2 l^6)) and a1 = (1 + sqrt(1 + 4 ml(ml+1)))/2.
struct ModelLevels {
  double alpha1;
  double E0, E1, E2;
  double omega;  // the frequency w above
};

ModelLevels model_levels(const SpacetimeParams& p);

enum class ModelFunction { psi1, psi2 };

/// Pointwise model eigenfunction, power convention (h^{-1/2}|x|)^p, not yet
/// normalized.  Throws std::domain_error for x >= 0.
double model_eigenfunction_raw(ModelFunction which, double x,
                               const SpacetimeParams& p);

/// Grid samples, L2-normalized.
std::vector<double> sample_model_eigenfunction(ModelFunction which,
                                               const RadialGrid& grid,
                                               const SpacetimeParams& p);

/// The 4-spinor K (psi1, psi2, psi2, psi1)^T trial vector, L2-normalized.
SpinorField model_trial_vector(GridPtr grid, const SpacetimeParams& p);

/// Scalar channel operator -h^2 d_x^2 + 1/l^2 + w^2 x^2 + h^2 c / x^2 applied
/// to a sample vector on a uniform grid (Dirichlet ends).
std::vector<double> apply_channel_operator(ModelFunction which,
                                           const RadialGrid& grid,
                                           const SpacetimeParams& p,
                                           const std::vector<double>& psi);

/// ||(L - E)psi|| / ||psi|| for the matching (eigenfunction, level) pair at
/// the grid's spacing and at half that spacing, plus the observed order.
struct ChannelResidual {
  double residual = 0.0;
  double residual_half = 0.0;
  double order = 0.0;
};

ChannelResidual channel_residual(ModelFunction which, const RadialGrid& grid,
                                 const SpacetimeParams& p);

/// Lowest eigenvalue of discrete P-tilde against [E0, E2 + h/2], with a
/// Richardson-style discretization slack from an n -> 2n refinement.
struct BracketCheck {
  double E_tilde = 0.0;     // lowest discrete eigenvalue
  double E_shifted = 0.0;   // eigenvalue nearest E2 (the proposition's shift)
  double E0 = 0.0, E2 = 0.0;
  double slack = 0.0;
  bool ok = false;
};

BracketCheck bracket_check(const SpacetimeParams& p, int n, double x_min,
                           double x_cut);

}  // namespace sads
