#pragma once

#include "sads/eigensolve.hpp"
#include "sads/fit.hpp"
#include "sads/grid.hpp"
#include "sads/potentials.hpp"
#include "sads/quasimode.hpp"

#include <vector>

namespace sads {

/// Configuration of the weighted estimates: quadratic weight e^{x^2/(c h)},
/// energy window 1/l^2 + T h, and nested forbidden-region intervals
/// Sigma_i = [x_plus, A_i) with A_1 < A_2 < x_A(1/l^2 + S).
struct AgmonConfig {
  double c = 0.0;
  double T = 0.0;
  double delta = 0.0;
  double k = 0.0;  // delta / (4 l^4 (T + 2 delta))
  double A1 = 0.0;
  double A2 = 0.0;
  double x_plus = 0.0;
  double S = 0.0;
};

/// Defaults: T = 2 alpha1 + 2, delta = 0.1/l^2, k from the lemma recipe,
/// c = 2/sqrt(k) (so (phi')^2 = (2x/c)^2 <= k x^2), A_i at 30% / 60% of
/// [x_plus, x_A(1/l^2+S)].  Throws ConfigError on broken nesting.
AgmonConfig make_agmon_config(const Potentials& pots, double S,
                              double frac1 = 0.3, double frac2 = 0.6);

/// Discrete L2 norm of e^{x^2/(c h)} f, computed in log space once the
/// largest exponent passes 600.  Throws SolverError if even the log-space
/// result cannot be represented.
double weighted_norm(const SpinorField& f, double c, double h);

struct WeightedInequality {
  double lhs = 0.0;            // ||e^{x^2/ch} phi||
  double norm_term = 0.0;      // ||phi||
  double residual_term = 0.0;  // h^{-1} ||e^{x^2/ch} (P+ - E) phi||
  double C_implied = 0.0;      // lhs / ||phi||
};

WeightedInequality check_weighted_inequality(const HermitianOperator& P_plus,
                                             const SpinorField& phi, double c,
                                             double E);

struct ForbiddenMass {
  double mass1 = 0.0;  // ||phi||_{L2(Sigma_1)}
  double mass2 = 0.0;
  bool flagged = false;  // below solver noise
};

ForbiddenMass forbidden_region_mass(const SpinorField& phi,
                                    const AgmonConfig& cfg, double solver_tol);

/// Pointwise lemma surrogate M(x,h) = A^2 - h|A'| - (1/l^2 + T h) - k x^2
/// minimized over [x_plus, x_A(1/l^2 + (T+2delta) h)] on a fine grid with
/// 4x refinement near both ends.  ok means min > delta h.
struct LemmaMargin {
  double min_value = 0.0;
  double threshold = 0.0;  // delta h
  double argmin_x = 0.0;
  double x_right = 0.0;
  bool ok = false;
};

LemmaMargin lemma_margin(const Potentials& pots, const AgmonConfig& cfg,
                         double h, int base_points = 10000);

struct AgmonRecord {
  double h = 0.0;
  double E = 0.0;            // eigenvalue used (P+ nearest E2)
  double mass1 = 0.0;
  double mass2 = 0.0;
  double C_implied = 0.0;
  double lemma_min = 0.0;
  double lemma_threshold = 0.0;
  bool flagged = false;
  bool window_ok = false;    // E < 1/l^2 + T h
};

struct AgmonSweepResult {
  std::vector<AgmonRecord> records;
  AgmonConfig config;
  double eps_fit = 0.0;       // decay rate of mass1 ~ e^{-eps/h}
  double eps_r_squared = 0.0;
  double c_growth = 0.0;      // growth exponent of log C_implied vs 1/h
  int used_records = 0;
};

struct AgmonSweepOptions {
  double x_cut = 0.0;    // <0 required; 0 = auto (-1e-3 l)
  double S = -1.0;       // <=0 = default_energy_window
  double frac1 = 0.3, frac2 = 0.6;
  double dx_base = -1.0;
  int n_override = 0;
  double solver_tol = 1e-11;
  int workers = 1;
  std::uint64_t seed = 0x5AD5;
};

AgmonSweepResult agmon_sweep(const SpacetimeParams& base,
                             const std::vector<double>& h_list,
                             const AgmonSweepOptions& opts = {});

}  // namespace sads
