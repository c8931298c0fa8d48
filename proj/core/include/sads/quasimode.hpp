#pragma once

#include "sads/eigensolve.hpp"
#include "sads/fit.hpp"
#include "sads/grid.hpp"
#include "sads/model_spectrum.hpp"
#include "sads/operators.hpp"
#include "sads/potentials.hpp"

#include <optional>
#include <vector>

namespace sads {

/// C-infinity cutoff built from the e^{-1/t} glue: 0 left of `lo`, 1 right
/// of `hi`, smooth monotone transition between.
struct ChiProfile {
  double lo = 0.0;
  double hi = 0.0;
  double value(double x) const;
  double deriv(double x) const;
};

/// Placement of the quasimode cutoff inside the classically forbidden
/// region [x_plus, x_A(1/l^2 + S)]: chi == 1 on [a_cut, 0), transition band
/// strictly inside [x_plus, a_cut].
struct CutoffGeometry {
  double S = 0.0;
  double x_plus = 0.0;
  double x_turn = 0.0;  // x_A(1/l^2 + S)
  double a_cut = 0.0;
  ChiProfile chi;
};

/// S default: half the barrier headroom A^2(x_plus) - 1/l^2.
double default_energy_window(const Potentials& pots);

/// Build the cutoff geometry.  band_lo/band_hi are fractions of
/// [x_plus, a_cut] measured from x_plus.  Pass S <= 0 for the default.
CutoffGeometry make_cutoff_geometry(const Potentials& pots, double S,
                                    double band_lo, double band_hi);

/// Eigenpair of P+ nearest the model level E2(h).
struct EPlusResult {
  EigenPair pair;
  double E2 = 0.0;
  double distance = 0.0;   // |E_plus - E2|
  bool distance_warning = false;  // distance > 10 sqrt(h)/l^2 (not fatal)
  bool below_window = false;      // E_plus < 1/l^2 + S
};

EPlusResult find_E_plus(const Potentials& pots, GridPtr restricted_grid,
                        double S, const EigenSolveOptions& opts = {});

/// chi-cutoff quasimode extended by zero to the full grid.
struct Quasimode {
  SpinorField phi;         // on grids.full, unit norm
  SpinorField phi_plus;    // H+ eigenvector on grids.restricted, unit norm
  double sqrtE_plus = 0.0; // H+ eigenvalue nearest +sqrt(E2)
  double E_plus = 0.0;     // P+ eigenvalue nearest E2
  double solver_residual = 0.0;
  double overlap_model = 0.0;  // |<phi_plus, normalized chi * model trial>|
  double overlap_pplus = 0.0;  // |<phi_plus, P+ eigenvector>| cross-check
  PairedGrids grids;
  CutoffGeometry geom;
};

Quasimode build_quasimode(const Potentials& pots, const PairedGrids& grids,
                          const CutoffGeometry& geom,
                          const EigenSolveOptions& opts = {});

/// ||(H - sqrtE) phi|| on the full grid, cross-checked against the
/// commutator identity ||h chi' phi_plus||.  Throws SolverError if the two
/// disagree beyond max(1e-10, 5 * floor_estimate).
struct ResidualMeasurement {
  double residual = 0.0;
  double commutator = 0.0;
};

ResidualMeasurement residual_norm(const Quasimode& qm,
                                  const HermitianOperator& H_full,
                                  double floor_estimate = 0.0);

struct ResidualRecord {
  double h = 0.0;
  double E_plus = 0.0;
  double sqrtE_plus = 0.0;
  double E2 = 0.0;
  double residual = 0.0;        // finest-grid measurement
  double residual_coarse = 0.0; // one refinement below, for the floor
  double residual_alt = 0.0;    // second chi band
  double commutator = 0.0;
  double floor_estimate = 0.0;
  bool floor_limited = false;
  double mass_fraction = 0.0;   // ||phi||^2 share inside |x| <= 10 sqrt(h) l^2
  double overlap_model = 0.0;
  double dist_E2 = 0.0;
  int n_restricted = 0;
  double dx = 0.0;
  BoundaryFit boundary;
};

struct SweepFit {
  double D = 0.0;
  double C = 0.0;  // residual ~ C e^{-D/h}
  double r_squared = 0.0;
  int used_records = 0;
};

struct SweepOptions {
  double x_cut = 0.0;           // <0 required; 0 = auto (-1e-3 l)
  double x_min_pad = 2.0;       // full grid extends to x_plus - pad*l
  double S = -1.0;              // <=0 = default_energy_window
  double band_lo = 0.1, band_hi = 0.4;
  double band_lo_alt = 0.3, band_hi_alt = 0.6;
  double dx_base = -1.0;        // <=0 = 1.5e-3 l
  int n_override = 0;           // fixed restricted-node count (testing)
  int refinements = 1;          // floor estimate from dx vs dx/2
  double solver_tol = 1e-11;
  int workers = 1;
  std::uint64_t seed = 0x5AD5;
};

struct SweepResult {
  std::vector<ResidualRecord> records;
  SweepFit fit;
  SweepFit fit_alt;  // second chi band
  CutoffGeometry geom;
  double S = 0.0;
};

/// Full residual sweep over a decreasing h list (independent per-h tasks,
/// merged in h order).  Fits log(residual) = -D/h + log(C) over records
/// that are not floor-limited; throws SolverError with fewer than 3 usable.
SweepResult residual_sweep(const SpacetimeParams& base,
                           const std::vector<double>& h_list,
                           const SweepOptions& opts = {});

/// Restricted-grid node count for the sweep's auto resolution rule.
int auto_restricted_nodes(const SpacetimeParams& p, const CutoffGeometry& geom,
                          double x_cut, double dx_base);

}  // namespace sads
