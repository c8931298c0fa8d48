#pragma once

#include "sads/grid.hpp"
#include "sads/operators.hpp"
#include "sads/quasimode.hpp"

#include <Eigen/SparseLU>
#include <memory>
#include <string>
#include <vector>

namespace sads {

/// Compact measurement window K = [a, b] strictly inside the grid.
struct CompactWindow {
  double a = 0.0;
  double b = 0.0;
};

/// Evolving spinor data with its step log.
struct EvolutionState {
  SpinorField field;
  double t = 0.0;
  std::vector<double> log_times;
  std::vector<double> log_norms;
};

/// Spectral-radius estimate by power iteration (deterministic start).
double operator_norm_estimate(const HermitianOperator& op, int iters = 30);

/// dt honoring dt * ||H|| <= 0.45.
double default_dt(const HermitianOperator& op);

/// Unitary Cayley stepping field <- (I - i dt H/2)^{-1} (I + i dt H/2) field.
/// One sparse factorization at construction, one solve per step.  The flow
/// is exactly e^{i t H_eff} with H_eff = (2/dt) atan(dt H / 2): unitary,
/// same eigenvectors, and |H_eff - E_eff| <= |H - E| spectrally, so Duhamel
/// lower bounds carry over without a dt^2 penalty.
class CayleyEvolver {
 public:
  CayleyEvolver(const HermitianOperator& H, double dt);
  CayleyEvolver(const CayleyEvolver&) = delete;
  CayleyEvolver& operator=(const CayleyEvolver&) = delete;

  void step(EvolutionState& s) const;
  /// Integer steps until s.t >= t_target (no partial steps).
  void advance(EvolutionState& s, double t_target) const;

  double dt() const { return dt_; }
  /// Largest per-step |norm ratio - 1| seen so far.
  double max_step_drift() const { return max_drift_; }

 private:
  Eigen::SparseMatrix<std::complex<double>> forward_;
  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu_;
  GridPtr grid_;
  double dt_;
  mutable double max_drift_ = 0.0;
};

/// One-shot evolution (factors once per call); validates dt against the
/// spectral radius and preserves the norm to solver tolerance per step.
EvolutionState evolve(const HermitianOperator& H, EvolutionState state,
                      double t_target, double dt);

/// ||field||_{L2(K)}; throws ConfigError if K is not strictly inside the grid.
double local_energy(const EvolutionState& state, const CompactWindow& K);
double local_energy(const SpinorField& field, const CompactWindow& K);

/// Evolves a quasimode and checks the pointwise Duhamel lower bound
/// ||e^{itH} phi||_K >= lambda - t r_h - slack at log-spaced times.
struct DecayCheck {
  std::vector<double> times;
  std::vector<double> local_energies;
  std::vector<double> total_norms;
  std::vector<double> bounds;
  double lambda = 0.0;
  double r_h = 0.0;
  bool ok = false;
  double worst_margin = 0.0;
  double worst_t = 0.0;
};

DecayCheck decay_experiment(const HermitianOperator& H, const SpinorField& phi,
                            double sqrtE, const CompactWindow& K, double t_max,
                            double dt, int snapshots = 24);

/// Slow-decay certificate built on the sweep fit residual ~ C e^{-D/h}:
/// t_h = ((lambda - h)/C) e^{D/h}; evolved to t_h when feasible, otherwise
/// certified from the pointwise bound with the measured r_h.
struct Certificate {
  double h = 0.0;
  double lambda = 0.0;
  double r_h = 0.0;
  double C = 0.0, D = 0.0;
  double t_h = 0.0;
  double dt = 0.0;
  double steps = 0.0;
  std::string branch;  // "evolved" or "analytic"
  double local_energy_at_t_h = 0.0;  // measured (evolved) or bound (analytic)
  double lower_value = 0.0;          // ln(t_h) * local energy lower bound
  double threshold = 0.0;            // D/2 - slack
  double slack = 0.0;
  bool smallness_ok = false;  // |h ln((lambda-h)/C)| <= D/2
  bool pass = false;
};

Certificate log_bound_certificate(const HermitianOperator& H_full,
                                  const SpinorField& phi, double sqrtE,
                                  double h, const SweepFit& fit,
                                  const CompactWindow& K, double dt = 0.0,
                                  double max_steps = 1e7);

}  // namespace sads
