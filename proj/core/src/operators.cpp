#include "sads/operators.hpp"

#include "sads/errors.hpp"
#include "sads/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace sads {

namespace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<cd>;

void add_block(std::vector<Triplet>& trips, int row_node, int col_node,
               const Mat4& block) {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const cd v = block(a, b);
      if (v != cd(0.0, 0.0))
        trips.emplace_back(4 * row_node + a, 4 * col_node + b, v);
    }
}

void check_coeffs(const RadialGrid& grid, const CoefficientSet& c) {
  const auto n = static_cast<size_t>(grid.n);
  if (c.A.size() != n || c.B.size() != n || c.A_dx.size() != n ||
      c.B_dx.size() != n)
    throw ConfigError("CoefficientSet size does not match grid");
  if (!(c.h > 0.0)) throw ConfigError("CoefficientSet: h must be > 0");
}

/// Well-resolution rule: spacing near the well (|x| <= 10 sqrt(h) l^2, with
/// l^2 read off the coefficient scale) must give >= 8 nodes per sqrt(h) l^2.
void check_resolution(const RadialGrid& grid, double h, double l) {
  const double well = std::sqrt(h) * l * l;
  const double limit = well / 8.0;
  double worst = 0.0;
  for (int j = 0; j < grid.n; ++j)
    if (grid.x[j] >= -10.0 * well) worst = std::max(worst, grid.w[j]);
  if (worst == 0.0) worst = grid.w.back();
  if (worst > limit)
    throw ConfigError("grid too coarse: spacing " + std::to_string(worst) +
                      " exceeds sqrt(h) l^2 / 8 = " + std::to_string(limit));
}

HermitianOperator finish(std::vector<Triplet>& trips, GridPtr grid,
                         OperatorKind kind, Bc bc, double h) {
  HermitianOperator op;
  op.mat.resize(4 * grid->n, 4 * grid->n);
  op.mat.setFromTriplets(trips.begin(), trips.end());
  op.mat.makeCompressed();
  op.grid = std::move(grid);
  op.kind = kind;
  op.bc = bc;
  op.h = h;
  return op;
}

}  // namespace

CoefficientSet sample_coefficients(const Potentials& pots, const RadialGrid& grid) {
  CoefficientSet c;
  c.m = pots.params().field_mass;
  c.h = pots.params().h;
  c.A.resize(grid.n);
  c.B.resize(grid.n);
  c.A_dx.resize(grid.n);
  c.B_dx.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const auto pt = pots.at(grid.x[j]);
    c.A[j] = pt.A;
    c.B[j] = pt.B;
    c.A_dx[j] = pt.A_dx;
    c.B_dx[j] = pt.B_dx;
  }
  return c;
}

CoefficientSet model_coefficients(const SpacetimeParams& p, const RadialGrid& grid) {
  CoefficientSet c;
  c.m = p.field_mass;
  c.h = p.h;
  const double l = p.ads_radius;
  const double l2 = l * l, l4 = l2 * l2;
  c.A.resize(grid.n);
  c.B.resize(grid.n);
  c.A_dx.resize(grid.n);
  c.B_dx.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x[j];
    const double a = std::sqrt(1.0 / l2 + x * x / l4);
    c.A[j] = a;
    c.B[j] = -l / x;
    c.A_dx[j] = (x / l4) / a;
    c.B_dx[j] = l / (x * x);
  }
  return c;
}

CoefficientSet frozen_coefficients(double a, double b, double m, double h,
                                   const RadialGrid& grid) {
  CoefficientSet c;
  c.m = m;
  c.h = h;
  c.A.assign(grid.n, a);
  c.B.assign(grid.n, b);
  c.A_dx.assign(grid.n, 0.0);
  c.B_dx.assign(grid.n, 0.0);
  return c;
}

HermitianOperator operator_from_matrix(Eigen::SparseMatrix<cd> mat, GridPtr grid) {
  if (mat.rows() != 4 * grid->n || mat.cols() != 4 * grid->n)
    throw ConfigError("operator_from_matrix: dimension mismatch");
  HermitianOperator op;
  op.mat = std::move(mat);
  op.mat.makeCompressed();
  op.grid = std::move(grid);
  return op;
}

HermitianOperator assemble_H(GridPtr grid, const CoefficientSet& c, Bc bc,
                             OperatorKind kind) {
  check_coeffs(*grid, c);
  if (bc == Bc::periodic && !grid->uniform)
    throw ConfigError("periodic closure requires a uniform grid");
  const auto& g = gammas();
  const int n = grid->n;
  const double h = c.h;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(n) * 24);
  const cd ih(0.0, h);
  for (int j = 0; j < n; ++j) {
    Mat4 diag = g.gamma02 * c.A[j] - (h * c.m * c.B[j]) * g.gamma0;
    add_block(trips, j, j, diag);
    if (j + 1 < n) {
      const double cpl = 0.5 / (grid->sqrt_w[j] * grid->sqrt_w[j + 1]);
      add_block(trips, j, j + 1, (ih * cpl) * g.gamma01);
      add_block(trips, j + 1, j, (-ih * cpl) * g.gamma01);
    }
  }
  if (bc == Bc::periodic && n > 2) {
    const double cpl = 0.5 / (grid->sqrt_w[n - 1] * grid->sqrt_w[0]);
    add_block(trips, n - 1, 0, (ih * cpl) * g.gamma01);
    add_block(trips, 0, n - 1, (-ih * cpl) * g.gamma01);
  }
  return finish(trips, std::move(grid), kind, bc, h);
}

HermitianOperator assemble_H(GridPtr grid, const Potentials& pots, Bc bc) {
  check_resolution(*grid, pots.params().h, pots.params().ads_radius);
  const auto c = sample_coefficients(pots, *grid);
  return assemble_H(std::move(grid), c, bc, OperatorKind::H);
}

HermitianOperator assemble_P(GridPtr grid, const CoefficientSet& c, Bc bc,
                             OperatorKind kind) {
  check_coeffs(*grid, c);
  if (bc == Bc::periodic && !grid->uniform)
    throw ConfigError("periodic closure requires a uniform grid");
  const auto& g = gammas();
  const int n = grid->n;
  const double h = c.h;
  const double h2 = h * h;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(n) * 20);
  const cd i1(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const double dl = grid->spacing_left(j);
    const double dr = grid->spacing_right(j);
    const double lap_diag = h2 * (1.0 / dl + 1.0 / dr) / grid->w[j];
    const double scalar =
        c.A[j] * c.A[j] + h2 * c.m * c.m * c.B[j] * c.B[j] + lap_diag;
    Mat4 v = scalar * Mat4::Identity() - (i1 * h * c.A_dx[j]) * g.gamma12 +
             (i1 * h2 * c.m * c.B_dx[j]) * g.gamma1;
    add_block(trips, j, j, v);
    if (j + 1 < n) {
      const double off = -h2 / (dr * grid->sqrt_w[j] * grid->sqrt_w[j + 1]);
      const Mat4 offm = off * Mat4::Identity();
      add_block(trips, j, j + 1, offm);
      add_block(trips, j + 1, j, offm);
    }
  }
  if (bc == Bc::periodic && n > 2) {
    const double off =
        -h2 / (grid->dx * grid->sqrt_w[n - 1] * grid->sqrt_w[0]);
    const Mat4 offm = off * Mat4::Identity();
    add_block(trips, n - 1, 0, offm);
    add_block(trips, 0, n - 1, offm);
  }
  return finish(trips, std::move(grid), kind, bc, h);
}

HermitianOperator assemble_P(GridPtr grid, const Potentials& pots, Bc bc) {
  check_resolution(*grid, pots.params().h, pots.params().ads_radius);
  const auto c = sample_coefficients(pots, *grid);
  return assemble_P(std::move(grid), c, bc, OperatorKind::P);
}

HermitianOperator assemble_model_P_tilde(GridPtr grid, const SpacetimeParams& p) {
  check_resolution(*grid, p.h, p.ads_radius);
  const auto c = model_coefficients(p, *grid);
  return assemble_P(std::move(grid), c, Bc::dirichlet, OperatorKind::P_tilde);
}

HermitianOperator assemble_restricted(Restricted kind, const Potentials& pots,
                                      GridPtr grid) {
  const double x_plus = pots.cutoff().x_plus;
  if (std::abs(grid->x_min - x_plus) > 1e-12 * std::max(1.0, std::abs(x_plus)))
    throw ConfigError("assemble_restricted: grid left endpoint must be x_plus");
  check_resolution(*grid, pots.params().h, pots.params().ads_radius);
  const auto c = sample_coefficients(pots, *grid);
  return kind == Restricted::P_plus
             ? assemble_P(std::move(grid), c, Bc::dirichlet, OperatorKind::P_plus)
             : assemble_H(std::move(grid), c, Bc::dirichlet, OperatorKind::H_plus);
}

SpinorField apply(const HermitianOperator& op, const SpinorField& f) {
  if (!op.grid->same_as(*f.grid))
    throw ConfigError("apply: operator and field live on different grids");
  SpinorField out(f.grid);
  if (op.grid->uniform) {
    out.values = op.mat * f.values;
    return out;
  }
  Eigen::VectorXcd scaled = f.values;
  for (int j = 0; j < op.grid->n; ++j)
    scaled.segment<4>(4 * j) *= op.grid->sqrt_w[j];
  scaled = op.mat * scaled;
  for (int j = 0; j < op.grid->n; ++j)
    scaled.segment<4>(4 * j) /= op.grid->sqrt_w[j];
  out.values = std::move(scaled);
  return out;
}

double quadratic_form(const HermitianOperator& op, const SpinorField& f) {
  return std::real(f.inner(apply(op, f)));
}

double hermiticity_residual(const HermitianOperator& op) {
  const Eigen::SparseMatrix<cd> adj = op.mat.adjoint();
  Eigen::SparseMatrix<cd> diff = op.mat - adj;
  double max_entry = 0.0;
  for (int k = 0; k < op.mat.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(op.mat, k); it; ++it)
      max_entry = std::max(max_entry, std::abs(it.value()));
  double max_diff = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(diff, k); it; ++it)
      max_diff = std::max(max_diff, std::abs(it.value()));
  return max_entry > 0.0 ? max_diff / max_entry : 0.0;
}

void write_coo(const HermitianOperator& op, std::ostream& os) {
  Eigen::SparseMatrix<cd, Eigen::RowMajor> rm(op.mat);
  char buf[128];
  for (int k = 0; k < rm.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd, Eigen::RowMajor>::InnerIterator it(rm, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g %.17g\n",
                    static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value().real(), it.value().imag());
      os << buf;
    }
}

BoundaryFit boundary_behavior_check(const SpinorField& f, const SpacetimeParams& p) {
  BoundaryFit out;
  const double ml = p.ml();
  out.log_corrected = std::abs(2.0 * ml - 3.0) < 1e-12;
  out.reference = out.log_corrected ? ml : std::min(1.5, ml);

  const double x_cut = f.grid->x_cut;
  double peak = 0.0;
  for (int j = 0; j < f.grid->n; ++j) peak = std::max(peak, f.node_norm(j));
  std::vector<double> lx, lv;
  for (int j = 0; j < f.grid->n; ++j) {
    const double x = f.grid->x[j];
    if (x < 10.0 * x_cut || x > x_cut) continue;
    const double v = f.node_norm(j);
    if (v <= 1e-12 * peak) continue;
    lx.push_back(std::log(-x));
    lv.push_back(std::log(v));
  }
  out.points_used = static_cast<int>(lx.size());
  if (peak == 0.0 || out.points_used < 6) {
    out.inconclusive = true;
    return out;
  }
  const LineFit fit = fit_line(lx, lv);
  out.exponent = fit.slope;
  // The domain estimate is an upper bound O((-x)^ref); eigenvectors may
  // decay faster, so consistency means at-least-that-fast.
  out.consistent = out.exponent >= out.reference - 0.25;
  return out;
}

}  // namespace sads
