#include "sads/agmon.hpp"

#include "sads/errors.hpp"
#include "sads/model_spectrum.hpp"
#include "parallel_for.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sads {

AgmonConfig make_agmon_config(const Potentials& pots, double S, double frac1,
                              double frac2) {
  if (!(frac1 > 0.0 && frac1 < frac2 && frac2 < 1.0))
    throw ConfigError("agmon config: need 0 < frac1 < frac2 < 1 (strict nesting)");
  const SpacetimeParams& p = pots.params();
  const double l = p.ads_radius;
  const double l2 = l * l;
  AgmonConfig cfg;
  cfg.S = (S > 0.0) ? S : default_energy_window(pots);
  cfg.delta = 0.1 / l2;
  cfg.T = 2.0 * model_levels(p).alpha1 + 2.0;
  cfg.k = cfg.delta / (4.0 * l2 * l2 * (cfg.T + 2.0 * cfg.delta));
  cfg.c = 2.0 / std::sqrt(cfg.k);
  cfg.x_plus = pots.cutoff().x_plus;
  const double x_turn = pots.turning_point_xA(1.0 / l2 + cfg.S);
  cfg.A1 = cfg.x_plus + frac1 * (x_turn - cfg.x_plus);
  cfg.A2 = cfg.x_plus + frac2 * (x_turn - cfg.x_plus);
  return cfg;
}

double weighted_norm(const SpinorField& f, double c, double h) {
  if (!(c > 0.0) || !(h > 0.0))
    throw ConfigError("weighted_norm: c and h must be > 0");
  const auto& grid = *f.grid;
  double max_e = 0.0;
  for (int j = 0; j < grid.n; ++j)
    max_e = std::max(max_e, grid.x[j] * grid.x[j] / (c * h));
  if (max_e < 600.0) {
    double acc = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      const double e = std::exp(grid.x[j] * grid.x[j] / (c * h));
      acc += grid.w[j] * e * e * f.values.segment<4>(4 * j).squaredNorm();
    }
    return std::sqrt(acc);
  }
  // Log-space: factor out the largest exponent.
  double acc = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double e = grid.x[j] * grid.x[j] / (c * h) - max_e;
    acc += grid.w[j] * std::exp(2.0 * e) * f.values.segment<4>(4 * j).squaredNorm();
  }
  const double log_norm = max_e + 0.5 * std::log(acc);
  if (log_norm > 700.0)
    throw SolverError("weighted_norm overflow: max exponent " +
                          std::to_string(max_e),
                      max_e);
  return std::exp(log_norm);
}

WeightedInequality check_weighted_inequality(const HermitianOperator& P_plus,
                                             const SpinorField& phi, double c,
                                             double E) {
  WeightedInequality out;
  const double h = P_plus.h;
  out.lhs = weighted_norm(phi, c, h);
  out.norm_term = phi.norm();
  SpinorField r = apply(P_plus, phi);
  r.values -= E * phi.values;
  out.residual_term = weighted_norm(r, c, h) / h;
  out.C_implied = out.lhs / out.norm_term;
  return out;
}

ForbiddenMass forbidden_region_mass(const SpinorField& phi,
                                    const AgmonConfig& cfg, double solver_tol) {
  if (!(cfg.A1 < cfg.A2))
    throw ConfigError("forbidden_region_mass: Sigma_1 must nest strictly in Sigma_2");
  ForbiddenMass out;
  out.mass1 = phi.norm_on_window(cfg.x_plus, cfg.A1);
  out.mass2 = phi.norm_on_window(cfg.x_plus, cfg.A2);
  out.flagged = out.mass1 < 10.0 * solver_tol;
  return out;
}

LemmaMargin lemma_margin(const Potentials& pots, const AgmonConfig& cfg,
                         double h, int base_points) {
  const double l = pots.params().ads_radius;
  const double l2 = l * l;
  const double E_window = 1.0 / l2 + cfg.T * h;
  LemmaMargin out;
  out.threshold = cfg.delta * h;
  // The proof works left of x_A(1/l^2 + (T + 2 delta) h), where the margin
  // bottoms out near 2 delta h - delta h / 4.
  out.x_right = pots.turning_point_xA(1.0 / l2 + (cfg.T + 2.0 * cfg.delta) * h);

  auto surrogate = [&](double x) {
    const auto pt = pots.at(x);
    return pt.A_sq - h * std::abs(pt.A_dx) - E_window - cfg.k * x * x;
  };

  std::vector<double> xs;
  xs.reserve(base_points + base_points / 2);
  const double span = out.x_right - cfg.x_plus;
  for (int i = 0; i <= base_points; ++i)
    xs.push_back(cfg.x_plus + span * i / base_points);
  // 4x refinement over the outer 5% at both ends; the minimum sits near
  // the right end where the window bites hardest.
  const int extra = base_points / 5;
  for (int i = 0; i <= extra; ++i) {
    xs.push_back(cfg.x_plus + 0.05 * span * i / extra);
    xs.push_back(out.x_right - 0.05 * span * i / extra);
  }
  out.min_value = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    const double v = surrogate(x);
    if (v < out.min_value) {
      out.min_value = v;
      out.argmin_x = x;
    }
  }
  out.ok = out.min_value > out.threshold;
  return out;
}

AgmonSweepResult agmon_sweep(const SpacetimeParams& base,
                             const std::vector<double>& h_list,
                             const AgmonSweepOptions& opts) {
  if (h_list.empty()) throw ConfigError("agmon_sweep: empty h list");
  const double l = base.ads_radius;
  const double x_cut = (opts.x_cut < 0.0) ? opts.x_cut : -1e-3 * l;
  const double dx_base = (opts.dx_base > 0.0) ? opts.dx_base : 1.5e-3 * l;

  const Potentials pots_ref(base.with_h(h_list.front()));
  AgmonSweepResult result;
  result.config = make_agmon_config(pots_ref, opts.S, opts.frac1, opts.frac2);
  const CutoffGeometry geom =
      make_cutoff_geometry(pots_ref, result.config.S, 0.1, 0.4);

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
                          : auto_restricted_nodes(ph, geom, x_cut, dx_base);
        const auto grid = make_uniform_grid(result.config.x_plus, x_cut, n);
        const auto eplus = find_E_plus(pots, grid, result.config.S, eopts);
        const auto P_plus = assemble_restricted(Restricted::P_plus, pots, grid);

        AgmonRecord rec;
        rec.h = ph.h;
        rec.E = eplus.pair.value;
        rec.window_ok =
            rec.E < 1.0 / (l * l) + result.config.T * ph.h;
        const auto mass =
            forbidden_region_mass(eplus.pair.vector, result.config, opts.solver_tol);
        rec.mass1 = mass.mass1;
        rec.mass2 = mass.mass2;
        rec.flagged = mass.flagged;
        const auto wi = check_weighted_inequality(P_plus, eplus.pair.vector,
                                                  result.config.c, rec.E);
        rec.C_implied = wi.C_implied;
        const auto lm = lemma_margin(pots, result.config, ph.h);
        rec.lemma_min = lm.min_value;
        rec.lemma_threshold = lm.threshold;
        result.records[i] = rec;
      });

  std::vector<double> xs, ys, yc;
  for (const auto& r : result.records) {
    if (r.flagged || !(r.mass1 > 0.0)) continue;
    xs.push_back(1.0 / r.h);
    ys.push_back(std::log(r.mass1));
    yc.push_back(std::log(r.C_implied));
  }
  result.used_records = static_cast<int>(xs.size());
  if (result.used_records >= 3) {
    const LineFit mass_fit = fit_line(xs, ys);
    result.eps_fit = -mass_fit.slope;
    result.eps_r_squared = mass_fit.r_squared;
    result.c_growth = fit_line(xs, yc).slope;
  }
  return result;
}

}  // namespace sads
