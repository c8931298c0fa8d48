#pragma once

#include "sads/gamma.hpp"
#include "sads/grid.hpp"
#include "sads/params.hpp"
#include "sads/potentials.hpp"

#include <Eigen/Sparse>
#include <complex>
#include <iosfwd>

namespace sads {

enum class Bc { dirichlet, periodic };
enum class OperatorKind { H, P, P_tilde, P_plus, H_plus, generic };

/// Node-sampled scalar coefficients entering H = i g0 g1 h d_x + g0 g2 A - h m g0 B
/// and its square's potential V = A^2 + h^2 m^2 B^2 - i h g1 g2 A' + i h^2 m g1 B'.
/// Tests freeze these to constants; the model operator swaps in its own set.
struct CoefficientSet {
  std::vector<double> A, B, A_dx, B_dx;
  double m = 0.0;
  double h = 0.0;
};

CoefficientSet sample_coefficients(const Potentials& pots, const RadialGrid& grid);
CoefficientSet model_coefficients(const SpacetimeParams& p, const RadialGrid& grid);
CoefficientSet frozen_coefficients(double a, double b, double m, double h,
                                   const RadialGrid& grid);

/// Sparse self-adjoint 4n x 4n matrix on a grid.  Nonuniform grids store the
/// weight-symmetrized similarity form, so Hermiticity is entrywise exact in
/// every case; apply() undoes the similarity transparently.
struct HermitianOperator {
  Eigen::SparseMatrix<std::complex<double>> mat;
  GridPtr grid;
  OperatorKind kind = OperatorKind::generic;
  Bc bc = Bc::dirichlet;
  double h = 0.0;
};

/// Wrap an externally built matrix (already in symmetrized form).
HermitianOperator operator_from_matrix(Eigen::SparseMatrix<std::complex<double>> mat,
                                       GridPtr grid);

/// First-order operator; antisymmetric centered first difference keeps the
/// i g0 g1 h d_x block Hermitian on the discrete level.
HermitianOperator assemble_H(GridPtr grid, const CoefficientSet& coeffs,
                             Bc bc = Bc::dirichlet,
                             OperatorKind kind = OperatorKind::H);
HermitianOperator assemble_H(GridPtr grid, const Potentials& pots,
                             Bc bc = Bc::dirichlet);

/// Direct assembly of P = -h^2 d_x^2 + V (not formed as H*H).
HermitianOperator assemble_P(GridPtr grid, const CoefficientSet& coeffs,
                             Bc bc = Bc::dirichlet,
                             OperatorKind kind = OperatorKind::P);
HermitianOperator assemble_P(GridPtr grid, const Potentials& pots,
                             Bc bc = Bc::dirichlet);

/// Comparison operator with the confining model potential.
HermitianOperator assemble_model_P_tilde(GridPtr grid, const SpacetimeParams& p);

enum class Restricted { P_plus, H_plus };

/// P or H restricted to [x_plus, x_cut] with Dirichlet at both ends.  The
/// grid's left endpoint must be the cutoff from Potentials (1e-12 relative).
HermitianOperator assemble_restricted(Restricted kind, const Potentials& pots,
                                      GridPtr grid);

SpinorField apply(const HermitianOperator& op, const SpinorField& f);

/// Re<f, O f> in the discrete L2 inner product.
double quadratic_form(const HermitianOperator& op, const SpinorField& f);

/// max_ij |O - O^H| / max_ij |O|.
double hermiticity_residual(const HermitianOperator& op);

/// Coordinate-list text dump (row col re im), row-major, deterministic.
void write_coo(const HermitianOperator& op, std::ostream& os);

/// Power-law fit of ||phi(x)|| ~ C (-x)^p over the last decade of nodes
/// before x_cut, compared with the domain-regularity exponent.
struct BoundaryFit {
  double exponent = 0.0;      // fitted p
  double reference = 0.0;     // min(3/2, ml)
  bool log_corrected = false; // 2ml == 3 branch
  bool inconclusive = false;  // not enough resolution or signal
  bool consistent = false;    // decays at least as fast as the reference
  int points_used = 0;
};

BoundaryFit boundary_behavior_check(const SpinorField& f, const SpacetimeParams& p);

}  // namespace sads
