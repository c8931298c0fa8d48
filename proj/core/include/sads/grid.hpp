#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

namespace sads {

class Potentials;

/// Truncated tortoise-coordinate mesh on [x_min, x_cut] with Dirichlet
/// endpoints.  Interior nodes x_1..x_n carry quadrature weights
/// w_j = (x_{j+1} - x_{j-1})/2 (uniform grids: w = dx everywhere).
/// An optionally graded variant clusters nodes geometrically toward x_cut
/// to resolve the (-x)^{ml} endpoint behavior.
struct RadialGrid {
  double x_min;            // left Dirichlet endpoint (< x_cut)
  double x_cut;            // right Dirichlet endpoint (< 0)
  int n;                   // interior node count
  bool uniform;
  double dx;               // uniform spacing; for graded grids the minimum
  std::vector<double> x;   // node positions, size n
  std::vector<double> w;   // quadrature weights, size n
  std::vector<double> sqrt_w;

  double spacing_left(int j) const;   // x_j - x_{j-1} (uses endpoints)
  double spacing_right(int j) const;  // x_{j+1} - x_j

  bool same_as(const RadialGrid& other) const;
  int nearest_index(double x_query) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_uniform_grid(double x_min, double x_cut, int n);

/// Geometric grading: spacing shrinks by `ratio` from x_min to x_cut.
GridPtr make_graded_grid(double x_min, double x_cut, int n, double ratio);

/// Full-line grid plus an aligned restricted grid on [x_plus, x_cut]:
/// both share the spacing set by n_restricted so a restricted field can be
/// extended by zero node-for-node.  `offset` is the full-grid index of
/// restricted node 0; full node offset-1 sits exactly at x_plus.
struct PairedGrids {
  GridPtr full;
  GridPtr restricted;
  int offset;
};

PairedGrids make_paired_grids(double x_plus, double x_min_request,
                              double x_cut, int n_restricted);

/// 4-component complex field sampled on a RadialGrid, stored node-major
/// (component c of node j at 4j + c).
struct SpinorField {
  GridPtr grid;
  Eigen::VectorXcd values;

  SpinorField() = default;
  explicit SpinorField(GridPtr g)
      : grid(std::move(g)), values(Eigen::VectorXcd::Zero(4 * grid->n)) {}

  int nodes() const { return grid->n; }

  /// Discrete L2 norm (quadrature weights included).
  double norm() const;
  std::complex<double> inner(const SpinorField& other) const;

  /// L2 norm restricted to nodes with a <= x_j <= b.
  double norm_on_window(double a, double b) const;

  /// Pointwise C^4 norm at node j.
  double node_norm(int j) const;

  void normalize();
};

/// Zero-extension of a restricted-grid field onto the paired full grid.
SpinorField extend_by_zero(const SpinorField& restricted, const PairedGrids& pair);

/// Deterministic pseudo-random field (unit L2 norm), for property tests
/// and solver starts.
SpinorField random_field(GridPtr grid, uint64_t seed);

}  // namespace sads
