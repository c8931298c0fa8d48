#include "sads/quasimode.hpp"

#include "sads/errors.hpp"
#include "parallel_for.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sads {

namespace {

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double glue_d(double t) {
  return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0;
}

}  // namespace

double ChiProfile::value(double x) const {
  const double t = (x - lo) / (hi - lo);
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double f = glue(t);
  return f / (f + glue(1.0 - t));
}

double ChiProfile::deriv(double x) const {
  const double t = (x - lo) / (hi - lo);
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double f = glue(t), g = glue(1.0 - t);
  const double num = glue_d(t) * g + f * glue_d(1.0 - t);
  return num / ((f + g) * (f + g)) / (hi - lo);
}

double default_energy_window(const Potentials& pots) {
  const double l = pots.params().ads_radius;
  return 0.5 * (pots.A_sq_at_cutoff() - 1.0 / (l * l));
}

CutoffGeometry make_cutoff_geometry(const Potentials& pots, double S,
                                    double band_lo, double band_hi) {
  if (!(band_lo > 0.0 && band_lo < band_hi && band_hi < 1.0))
    throw ConfigError("cutoff geometry: need 0 < band_lo < band_hi < 1");
  CutoffGeometry geom;
  geom.S = (S > 0.0) ? S : default_energy_window(pots);
  const double l = pots.params().ads_radius;
  if (!(1.0 / (l * l) + geom.S < pots.A_sq_at_cutoff()))
    throw ConfigError("cutoff geometry: 1/l^2 + S must stay below A^2(x_plus)");
  geom.x_plus = pots.cutoff().x_plus;
  geom.x_turn = pots.turning_point_xA(1.0 / (l * l) + geom.S);
  // chi must be 1 strictly left of the turning point; 1.5*x_turn when that
  // stays right of x_plus, otherwise 45% of the way down the barrier.
  const double aggressive = 1.5 * geom.x_turn;
  geom.a_cut = (aggressive > geom.x_plus)
                   ? aggressive
                   : geom.x_plus + 0.45 * (geom.x_turn - geom.x_plus);
  const double w = geom.a_cut - geom.x_plus;
  geom.chi.lo = geom.x_plus + band_lo * w;
  geom.chi.hi = geom.x_plus + band_hi * w;
  return geom;
}

EPlusResult find_E_plus(const Potentials& pots, GridPtr restricted_grid,
                        double S, const EigenSolveOptions& opts) {
  const SpacetimeParams& p = pots.params();
  const ModelLevels lv = model_levels(p);
  const auto P_plus =
      assemble_restricted(Restricted::P_plus, pots, std::move(restricted_grid));
  EPlusResult out;
  out.E2 = lv.E2;
  auto pairs = eigen_solve(P_plus, lv.E2, 1, opts);
  out.pair = std::move(pairs[0]);
  out.distance = std::abs(out.pair.value - lv.E2);
  const double l2 = p.ads_radius * p.ads_radius;
  out.distance_warning = out.distance > 10.0 * std::sqrt(p.h) / l2;
  const double window = (S > 0.0) ? S : default_energy_window(pots);
  out.below_window = out.pair.value < 1.0 / l2 + window;
  return out;
}

namespace {

/// Largest-magnitude entry made real positive (deterministic overlaps).
void fix_phase(SpinorField& f) {
  Eigen::Index imax = 0;
  double best = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const double a = std::abs(f.values[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (best > 0.0) f.values *= std::conj(f.values[imax]) / best;
}

SpinorField cut_and_extend(const SpinorField& phi_plus, const PairedGrids& grids,
                           const ChiProfile& chi) {
  SpinorField cut(grids.restricted);
  for (int j = 0; j < grids.restricted->n; ++j)
    cut.values.segment<4>(4 * j) =
        chi.value(grids.restricted->x[j]) * phi_plus.values.segment<4>(4 * j);
  SpinorField full = extend_by_zero(cut, grids);
  full.normalize();
  return full;
}

}  // namespace

Quasimode build_quasimode(const Potentials& pots, const PairedGrids& grids,
                          const CutoffGeometry& geom,
                          const EigenSolveOptions& opts) {
  const SpacetimeParams& p = pots.params();
  const ModelLevels lv = model_levels(p);
  const double target = std::sqrt(lv.E2);
  const auto H_plus =
      assemble_restricted(Restricted::H_plus, pots, grids.restricted);
  auto pairs = eigen_solve(H_plus, target, 4, opts);
  const double window = 10.0 * std::sqrt(p.h);
  const EigenPair* best = nullptr;
  for (const auto& pr : pairs)
    if (std::abs(pr.value - target) <= window &&
        (!best || std::abs(pr.value - target) < std::abs(best->value - target)))
      best = &pr;
  if (!best) {
    std::ostringstream msg;
    msg << "build_quasimode: no H+ eigenvalue within " << window
        << " of sqrt(E2) = " << target << "; nearest candidates:";
    for (const auto& pr : pairs) msg << ' ' << pr.value;
    throw PhysicsError(msg.str());
  }

  Quasimode qm;
  qm.grids = grids;
  qm.geom = geom;
  qm.sqrtE_plus = best->value;
  qm.E_plus = best->value * best->value;
  qm.solver_residual = best->residual;
  qm.phi_plus = best->vector;
  fix_phase(qm.phi_plus);
  qm.phi = cut_and_extend(qm.phi_plus, grids, geom.chi);

  SpinorField trial = model_trial_vector(grids.restricted, p);
  for (int j = 0; j < grids.restricted->n; ++j)
    trial.values.segment<4>(4 * j) *= geom.chi.value(grids.restricted->x[j]);
  trial.normalize();
  qm.overlap_model = std::abs(qm.phi_plus.inner(trial));
  return qm;
}

ResidualMeasurement residual_norm(const Quasimode& qm,
                                  const HermitianOperator& H_full,
                                  double floor_estimate) {
  if (!H_full.grid->same_as(*qm.grids.full))
    throw ConfigError("residual_norm: H not assembled on the quasimode grid");
  ResidualMeasurement out;
  SpinorField r = apply(H_full, qm.phi);
  r.values -= qm.sqrtE_plus * qm.phi.values;
  out.residual = r.norm();

  // Commutator identity: (H - sqrtE)(chi phi+) = i g0 g1 h chi' phi+, and
  // g0 g1 is unitary, so the norm is h ||chi' phi+|| / ||chi phi+||.
  const auto& grid = *qm.grids.restricted;
  double acc = 0.0, norm_cut = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double nj2 = qm.phi_plus.values.segment<4>(4 * j).squaredNorm();
    const double dchi = qm.geom.chi.deriv(grid.x[j]);
    const double chi = qm.geom.chi.value(grid.x[j]);
    acc += grid.w[j] * dchi * dchi * nj2;
    norm_cut += grid.w[j] * chi * chi * nj2;
  }
  const double h = H_full.h;
  out.commutator = h * std::sqrt(acc / norm_cut);

  const double tol = std::max(1e-10, 5.0 * floor_estimate);
  if (std::abs(out.residual - out.commutator) > tol)
    throw SolverError(
        "residual_norm: commutator cross-check disagreement " +
            std::to_string(std::abs(out.residual - out.commutator)) +
            " exceeds " + std::to_string(tol),
        std::abs(out.residual - out.commutator));
  return out;
}

int auto_restricted_nodes(const SpacetimeParams& p, const CutoffGeometry& geom,
                          double x_cut, double dx_base) {
  const double l = p.ads_radius;
  const double band = geom.chi.hi - geom.chi.lo;
  const double dx =
      std::min({std::sqrt(p.h) * l * l / 8.0, band / 10.0, dx_base});
  const double span = x_cut - geom.x_plus;
  return std::max(64, static_cast<int>(std::ceil(span / dx)) - 1);
}

namespace {

struct PipelinePass {
  ResidualRecord rec;
  double residual = 0.0;
  double residual_alt = 0.0;
  double commutator = 0.0;
};

PipelinePass run_pass(const Potentials& pots, const CutoffGeometry& geom,
                      const CutoffGeometry& geom_alt, double x_cut,
                      double x_min_pad, int n, const EigenSolveOptions& eopts) {
  const SpacetimeParams& p = pots.params();
  const double l = p.ads_radius;
  const auto grids =
      make_paired_grids(geom.x_plus, geom.x_plus - x_min_pad * l, x_cut, n);
  const auto eplus = find_E_plus(pots, grids.restricted, geom.S, eopts);
  Quasimode qm = build_quasimode(pots, grids, geom, eopts);
  qm.E_plus = eplus.pair.value;
  qm.overlap_pplus = std::abs(qm.phi_plus.inner(eplus.pair.vector));
  const auto H_full = assemble_H(grids.full, pots);
  const auto meas =
      residual_norm(qm, H_full, std::numeric_limits<double>::infinity());

  PipelinePass pass;
  pass.residual = meas.residual;
  pass.commutator = meas.commutator;

  Quasimode qm_alt = qm;
  qm_alt.geom = geom_alt;
  qm_alt.phi = cut_and_extend(qm.phi_plus, grids, geom_alt.chi);
  pass.residual_alt =
      residual_norm(qm_alt, H_full, std::numeric_limits<double>::infinity())
          .residual;

  ResidualRecord& rec = pass.rec;
  rec.h = p.h;
  rec.E_plus = eplus.pair.value;
  rec.sqrtE_plus = qm.sqrtE_plus;
  rec.E2 = eplus.E2;
  rec.dist_E2 = eplus.distance;
  rec.overlap_model = qm.overlap_model;
  rec.n_restricted = n;
  rec.dx = grids.restricted->dx;
  const double window = 10.0 * std::sqrt(p.h) * l * l;
  const double frac = qm.phi.norm_on_window(-window, 0.0);
  rec.mass_fraction = frac * frac;
  rec.boundary = boundary_behavior_check(qm.phi_plus, p);
  return pass;
}

SweepFit fit_records(const std::vector<ResidualRecord>& records, bool alt) {
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (r.floor_limited) continue;
    const double value = alt ? r.residual_alt : r.residual;
    if (!(value > 0.0)) continue;
    xs.push_back(1.0 / r.h);
    ys.push_back(std::log(value));
  }
  if (xs.size() < 3)
    throw SolverError("residual sweep fit: fewer than 3 usable records",
                      static_cast<double>(xs.size()));
  const LineFit lf = fit_line(xs, ys);
  SweepFit fit;
  fit.D = -lf.slope;
  fit.C = std::exp(lf.intercept);
  fit.r_squared = lf.r_squared;
  fit.used_records = static_cast<int>(xs.size());
  return fit;
}

}  // namespace

SweepResult residual_sweep(const SpacetimeParams& base,
                           const std::vector<double>& h_list,
                           const SweepOptions& opts) {
  if (h_list.empty()) throw ConfigError("residual_sweep: empty h list");
  for (size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1]))
      throw ConfigError("residual_sweep: h list must be strictly decreasing");

  const double l = base.ads_radius;
  const double x_cut = (opts.x_cut < 0.0) ? opts.x_cut : -1e-3 * l;
  const double dx_base = (opts.dx_base > 0.0) ? opts.dx_base : 1.5e-3 * l;

  const Potentials pots_ref(base.with_h(h_list.front()));
  SweepResult result;
  result.geom =
      make_cutoff_geometry(pots_ref, opts.S, opts.band_lo, opts.band_hi);
  result.S = result.geom.S;
  const CutoffGeometry geom_alt = make_cutoff_geometry(
      pots_ref, result.geom.S, opts.band_lo_alt, opts.band_hi_alt);

  result.records.resize(h_list.size());
  EigenSolveOptions eopts;
  eopts.tol = opts.solver_tol;
  eopts.seed = opts.seed;

  detail::parallel_for(
      static_cast<int>(h_list.size()), opts.workers, [&](int i) {
        const SpacetimeParams ph = base.with_h(h_list[i]);
        const Potentials pots(ph);
        const int n = (opts.n_override > 0)
                          ? opts.n_override
                          : auto_restricted_nodes(ph, result.geom, x_cut, dx_base);
        PipelinePass coarse = run_pass(pots, result.geom, geom_alt, x_cut,
                                       opts.x_min_pad, n, eopts);
        ResidualRecord rec = coarse.rec;
        rec.residual = coarse.residual;
        rec.residual_coarse = coarse.residual;
        rec.residual_alt = coarse.residual_alt;
        rec.commutator = coarse.commutator;
        rec.floor_estimate = 10.0 * opts.solver_tol;
        if (opts.refinements > 0) {
          PipelinePass fine = run_pass(pots, result.geom, geom_alt, x_cut,
                                       opts.x_min_pad, 2 * n + 1, eopts);
          rec = fine.rec;
          rec.residual = fine.residual;
          rec.residual_coarse = coarse.residual;
          rec.residual_alt = fine.residual_alt;
          rec.commutator = fine.commutator;
          rec.floor_estimate =
              (4.0 / 3.0) * std::abs(fine.residual - coarse.residual) +
              10.0 * opts.solver_tol;
        }
        rec.floor_limited = rec.residual < 10.0 * rec.floor_estimate;
        const double tol = std::max(1e-10, 5.0 * rec.floor_estimate);
        if (std::abs(rec.residual - rec.commutator) > tol)
          throw SolverError("residual sweep: commutator disagreement at h = " +
                                std::to_string(rec.h),
                            std::abs(rec.residual - rec.commutator));
        result.records[i] = rec;
      });

  result.fit = fit_records(result.records, false);
  result.fit_alt = fit_records(result.records, true);
  return result;
}

}  // namespace sads
