#include "sads/evolution.hpp"

#include "sads/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sads {

namespace {
using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;
}  // namespace

double operator_norm_estimate(const HermitianOperator& op, int iters) {
  std::mt19937_64 rng(0xE57);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXcd v(op.mat.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cd(dist(rng), dist(rng));
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < iters; ++it) {
    v = op.mat * v;
    est = v.norm();
    if (est == 0.0) return 0.0;
    v /= est;
  }
  return est;
}

double default_dt(const HermitianOperator& op) {
  const double nrm = operator_norm_estimate(op);
  if (!(nrm > 0.0)) throw SolverError("default_dt: norm estimate failed", 0.0);
  return 0.45 / nrm;
}

CayleyEvolver::CayleyEvolver(const HermitianOperator& H, double dt)
    : grid_(H.grid), dt_(dt) {
  if (!(dt > 0.0)) throw ConfigError("CayleyEvolver: dt must be > 0");
  const double nrm = operator_norm_estimate(H);
  if (dt * nrm > 0.5)
    throw ConfigError("CayleyEvolver: dt too large, dt*||H|| = " +
                      std::to_string(dt * nrm) + " > 0.5");
  SpMat id(H.mat.rows(), H.mat.cols());
  id.setIdentity();
  const cd half(0.0, 0.5 * dt);
  forward_ = id + half * H.mat;
  SpMat backward = id - half * H.mat;
  lu_.compute(backward);
  if (lu_.info() != Eigen::Success)
    throw SolverError("CayleyEvolver: factorization failed", 1.0);
}

void CayleyEvolver::step(EvolutionState& s) const {
  if (!s.field.grid->same_as(*grid_))
    throw ConfigError("CayleyEvolver: field grid mismatch");
  Eigen::VectorXcd& v = s.field.values;
  const bool scaled = !grid_->uniform;
  if (scaled)
    for (int j = 0; j < grid_->n; ++j)
      v.segment<4>(4 * j) *= grid_->sqrt_w[j];
  const double before = v.norm();
  v = lu_.solve(forward_ * v);
  const double after = v.norm();
  if (before > 0.0)
    max_drift_ = std::max(max_drift_, std::abs(after / before - 1.0));
  if (scaled)
    for (int j = 0; j < grid_->n; ++j)
      v.segment<4>(4 * j) /= grid_->sqrt_w[j];
  s.t += dt_;
}

void CayleyEvolver::advance(EvolutionState& s, double t_target) const {
  while (s.t < t_target - 0.5 * dt_) step(s);
}

EvolutionState evolve(const HermitianOperator& H, EvolutionState state,
                      double t_target, double dt) {
  const CayleyEvolver ev(H, dt);
  ev.advance(state, t_target);
  state.log_times.push_back(state.t);
  state.log_norms.push_back(state.field.norm());
  return state;
}

namespace {

void check_window(const RadialGrid& grid, const CompactWindow& K) {
  if (!(K.a < K.b) || !(K.b < 0.0))
    throw ConfigError("CompactWindow: need a < b < 0");
  if (K.a < grid.x_min || K.b > grid.x_cut)
    throw ConfigError("CompactWindow: K not inside the grid interior");
}

}  // namespace

double local_energy(const SpinorField& field, const CompactWindow& K) {
  check_window(*field.grid, K);
  return field.norm_on_window(K.a, K.b);
}

double local_energy(const EvolutionState& state, const CompactWindow& K) {
  return local_energy(state.field, K);
}

DecayCheck decay_experiment(const HermitianOperator& H, const SpinorField& phi,
                            double sqrtE, const CompactWindow& K, double t_max,
                            double dt, int snapshots) {
  check_window(*H.grid, K);
  DecayCheck out;
  out.lambda = local_energy(phi, K);
  SpinorField resid = apply(H, phi);
  resid.values -= sqrtE * phi.values;
  out.r_h = resid.norm();

  const CayleyEvolver ev(H, dt);
  EvolutionState state;
  state.field = phi;
  const double norm0 = phi.norm();

  const double t0 = std::max(10.0 * dt, t_max / 1000.0);
  std::vector<double> targets;
  targets.push_back(0.0);
  for (int k = 0; k < snapshots; ++k)
    targets.push_back(t0 * std::pow(t_max / t0, static_cast<double>(k) /
                                                    (snapshots - 1)));

  out.ok = true;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (const double target : targets) {
    ev.advance(state, target);
    const double le = local_energy(state, K);
    const double norm_t = state.field.norm();
    state.log_times.push_back(state.t);
    state.log_norms.push_back(norm_t);
    // Cayley is the exact flow of (2/dt) atan(dt H/2), which contracts
    // (H - E) residuals, so only unitarity drift enters the slack.
    const double drift = std::abs(norm_t - norm0);
    const double slack = 10.0 * drift + 1e-12 * (1.0 + state.t * std::abs(sqrtE));
    const double bound = out.lambda - state.t * out.r_h - slack;
    out.times.push_back(state.t);
    out.local_energies.push_back(le);
    out.total_norms.push_back(norm_t);
    out.bounds.push_back(bound);
    const double margin = le - bound;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_t = state.t;
    }
    if (margin < 0.0) out.ok = false;
  }
  return out;
}

Certificate log_bound_certificate(const HermitianOperator& H_full,
                                  const SpinorField& phi, double sqrtE,
                                  double h, const SweepFit& fit,
                                  const CompactWindow& K, double dt,
                                  double max_steps) {
  check_window(*H_full.grid, K);
  Certificate cert;
  cert.h = h;
  cert.C = fit.C;
  cert.D = fit.D;
  cert.lambda = local_energy(phi, K);
  if (!(cert.lambda > h))
    throw PhysicsError(
        "log_bound_certificate: ||phi||_K = " + std::to_string(cert.lambda) +
        " <= h; pick a smaller h or a larger window");

  SpinorField resid = apply(H_full, phi);
  resid.values -= sqrtE * phi.values;
  cert.r_h = resid.norm();

  cert.t_h = (cert.lambda - h) / fit.C * std::exp(fit.D / h);
  cert.smallness_ok =
      std::abs(h * std::log((cert.lambda - h) / fit.C)) <= fit.D / 2.0;

  cert.dt = (dt > 0.0) ? dt : default_dt(H_full);
  cert.steps = cert.t_h / cert.dt;

  if (cert.steps <= max_steps) {
    cert.branch = "evolved";
    const CayleyEvolver ev(H_full, cert.dt);
    EvolutionState state;
    state.field = phi;
    const double norm0 = phi.norm();
    ev.advance(state, cert.t_h);
    cert.local_energy_at_t_h = local_energy(state, K);
    cert.slack = 10.0 * std::abs(state.field.norm() - norm0) + 1e-10;
    cert.lower_value = std::log(state.t) * cert.local_energy_at_t_h;
    cert.threshold = fit.D / 2.0 - cert.slack;
    cert.pass = cert.smallness_ok && cert.lower_value >= cert.threshold;
  } else {
    cert.branch = "analytic";
    // Pointwise Duhamel bound with the residual measured on this grid:
    // ||e^{i t H} phi||_K >= lambda - t r_h for the discrete unitary flow.
    const double lb = cert.lambda - cert.t_h * cert.r_h;
    cert.local_energy_at_t_h = lb;
    cert.slack = 0.0;
    cert.lower_value = lb > 0.0 ? std::log(cert.t_h) * lb : 0.0;
    cert.threshold = fit.D / 2.0;
    cert.pass = cert.smallness_ok && lb > 0.0 &&
                cert.lower_value >= cert.threshold;
  }
  return cert;
}

}  // namespace sads
