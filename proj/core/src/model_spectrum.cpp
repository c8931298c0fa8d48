#include "sads/model_spectrum.hpp"

#include "sads/errors.hpp"
#include "sads/gamma.hpp"

#include <cmath>
#include <stdexcept>

namespace sads {

ModelLevels model_levels(const SpacetimeParams& p) {
  const double ml = p.ml();
  const double l = p.ads_radius;
  const double l2 = l * l;
  const double l4 = l2 * l2;
  const double l6 = l4 * l2;
  ModelLevels lv;
  lv.alpha1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * ml * (ml + 1.0)));
  lv.omega = std::sqrt(1.0 / l4 + p.h / (2.0 * l6));
  lv.E0 = 1.0 / l2 - p.h / 2.0;
  lv.E1 = 1.0 / l2 + (2.0 * ml + 1.0) * lv.omega * p.h;
  lv.E2 = 1.0 / l2 + (2.0 * lv.alpha1 + 1.0) * lv.omega * p.h;
  return lv;
}

double model_eigenfunction_raw(ModelFunction which, double x,
                               const SpacetimeParams& p) {
  if (!(x < 0.0)) throw std::domain_error("model_eigenfunction: x must be < 0");
  const ModelLevels lv = model_levels(p);
  const double power = (which == ModelFunction::psi1) ? p.ml() : lv.alpha1;
  const double h = p.h;
  // (h^{-1/2} x)^p with the |x| branch; log-space for the tails.
  const double log_val = -0.25 * std::log(h) +
                         power * std::log(-x / std::sqrt(h)) -
                         lv.omega * x * x / (2.0 * h);
  return (log_val < -700.0) ? 0.0 : std::exp(log_val);
}

std::vector<double> sample_model_eigenfunction(ModelFunction which,
                                               const RadialGrid& grid,
                                               const SpacetimeParams& p) {
  std::vector<double> psi(grid.n);
  double norm2 = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    psi[j] = model_eigenfunction_raw(which, grid.x[j], p);
    norm2 += grid.w[j] * psi[j] * psi[j];
  }
  const double nrm = std::sqrt(norm2);
  if (nrm == 0.0) throw SolverError("model eigenfunction vanished on grid", 1.0);
  for (double& v : psi) v /= nrm;
  return psi;
}

SpinorField model_trial_vector(GridPtr grid, const SpacetimeParams& p) {
  const auto psi1 = sample_model_eigenfunction(ModelFunction::psi1, *grid, p);
  const auto psi2 = sample_model_eigenfunction(ModelFunction::psi2, *grid, p);
  const Mat4& K = k_basis().K;
  SpinorField f(grid);
  for (int j = 0; j < grid->n; ++j) {
    Eigen::Vector4cd channel;
    channel << psi1[j], psi2[j], psi2[j], psi1[j];
    f.values.segment<4>(4 * j) = K * channel;
  }
  f.normalize();
  return f;
}

std::vector<double> apply_channel_operator(ModelFunction which,
                                           const RadialGrid& grid,
                                           const SpacetimeParams& p,
                                           const std::vector<double>& psi) {
  if (!grid.uniform)
    throw ConfigError("apply_channel_operator: uniform grid required");
  if (psi.size() != static_cast<size_t>(grid.n))
    throw ConfigError("apply_channel_operator: size mismatch");
  const ModelLevels lv = model_levels(p);
  const double ml = p.ml();
  const double strength =
      (which == ModelFunction::psi1) ? ml * (ml - 1.0) : ml * (ml + 1.0);
  const double h2 = p.h * p.h;
  const double l2 = p.ads_radius * p.ads_radius;
  const double w2 = lv.omega * lv.omega;
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
  std::vector<double> out(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double left = (j > 0) ? psi[j - 1] : 0.0;
    const double right = (j + 1 < grid.n) ? psi[j + 1] : 0.0;
    const double x = grid.x[j];
    const double pot = 1.0 / l2 + w2 * x * x + h2 * strength / (x * x);
    out[j] = -h2 * (right - 2.0 * psi[j] + left) * inv_dx2 + pot * psi[j];
  }
  return out;
}

namespace {

double channel_residual_once(ModelFunction which, const RadialGrid& grid,
                             const SpacetimeParams& p) {
  const ModelLevels lv = model_levels(p);
  const double E = (which == ModelFunction::psi1) ? lv.E1 : lv.E2;
  const auto psi = sample_model_eigenfunction(which, grid, p);
  const auto lpsi = apply_channel_operator(which, grid, p, psi);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double r = lpsi[j] - E * psi[j];
    num += grid.w[j] * r * r;
    den += grid.w[j] * psi[j] * psi[j];
  }
  return std::sqrt(num / den);
}

}  // namespace

ChannelResidual channel_residual(ModelFunction which, const RadialGrid& grid,
                                 const SpacetimeParams& p) {
  ChannelResidual out;
  out.residual = channel_residual_once(which, grid, p);
  // 2n+1 interior nodes exactly halve the spacing.
  const auto fine = make_uniform_grid(grid.x_min, grid.x_cut, 2 * grid.n + 1);
  out.residual_half = channel_residual_once(which, *fine, p);
  out.order = std::log2(out.residual / out.residual_half);
  return out;
}

BracketCheck bracket_check(const SpacetimeParams& p, int n, double x_min,
                           double x_cut) {
  const ModelLevels lv = model_levels(p);
  BracketCheck out;
  out.E0 = lv.E0;
  out.E2 = lv.E2;

  auto lowest = [&](int nodes) {
    const auto grid = make_uniform_grid(x_min, x_cut, nodes);
    const auto op = assemble_model_P_tilde(grid, p);
    // A shift below E0 makes "nearest" the spectrum bottom; ask for two so a
    // stray lower state would be seen.
    const double shift = lv.E0 - 0.5 * p.h - 0.1 / (p.ads_radius * p.ads_radius);
    auto pairs = eigen_solve(op, shift, 2);
    return std::min(pairs[0].value, pairs[1].value);
  };

  out.E_tilde = lowest(n);
  const double refined = lowest(2 * n + 1);
  out.slack = 10.0 * std::abs(out.E_tilde - refined) * (4.0 / 3.0) + 1e-12;

  const auto grid = make_uniform_grid(x_min, x_cut, n);
  const auto op = assemble_model_P_tilde(grid, p);
  out.E_shifted = eigen_solve(op, lv.E2, 1)[0].value;

  out.ok = (out.E_tilde >= lv.E0 - out.slack) &&
           (out.E_tilde <= lv.E2 + p.h / 2.0 + out.slack);
  return out;
}

}  // namespace sads
