#include "sads/grid.hpp"

#include "sads/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sads {

namespace {

void finish_grid(RadialGrid& g) {
  g.w.resize(g.n);
  g.sqrt_w.resize(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double left = (j == 0) ? g.x_min : g.x[j - 1];
    const double right = (j == g.n - 1) ? g.x_cut : g.x[j + 1];
    g.w[j] = 0.5 * (right - left);
    g.sqrt_w[j] = std::sqrt(g.w[j]);
  }
}

void check_span(double x_min, double x_cut, int n) {
  if (!(x_min < x_cut) || !(x_cut < 0.0))
    throw ConfigError("RadialGrid: need x_min < x_cut < 0");
  if (n < 8) throw ConfigError("RadialGrid: need at least 8 interior nodes");
}

}  // namespace

double RadialGrid::spacing_left(int j) const {
  return x[j] - (j == 0 ? x_min : x[j - 1]);
}

double RadialGrid::spacing_right(int j) const {
  return (j == n - 1 ? x_cut : x[j + 1]) - x[j];
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return n == other.n && x_min == other.x_min && x_cut == other.x_cut &&
         uniform == other.uniform;
}

int RadialGrid::nearest_index(double x_query) const {
  const auto it = std::lower_bound(x.begin(), x.end(), x_query);
  if (it == x.begin()) return 0;
  if (it == x.end()) return n - 1;
  const int hi = static_cast<int>(it - x.begin());
  return (x[hi] - x_query < x_query - x[hi - 1]) ? hi : hi - 1;
}

GridPtr make_uniform_grid(double x_min, double x_cut, int n) {
  check_span(x_min, x_cut, n);
  auto g = std::make_shared<RadialGrid>();
  g->x_min = x_min;
  g->x_cut = x_cut;
  g->n = n;
  g->uniform = true;
  g->dx = (x_cut - x_min) / (n + 1);
  g->x.resize(n);
  for (int j = 0; j < n; ++j) g->x[j] = x_min + (j + 1) * g->dx;
  finish_grid(*g);
  return g;
}

GridPtr make_graded_grid(double x_min, double x_cut, int n, double ratio) {
  check_span(x_min, x_cut, n);
  if (!(ratio > 1.0)) throw ConfigError("graded grid: ratio must be > 1");
  auto g = std::make_shared<RadialGrid>();
  g->x_min = x_min;
  g->x_cut = x_cut;
  g->n = n;
  g->uniform = false;
  // n+1 spacings shrinking geometrically by `ratio` overall.
  const double q = std::pow(ratio, -1.0 / n);
  const double total = x_cut - x_min;
  const double c0 = total * (1.0 - q) / (1.0 - std::pow(q, n + 1));
  g->x.resize(n);
  double pos = x_min;
  double step = c0;
  for (int j = 0; j < n; ++j) {
    pos += step;
    g->x[j] = pos;
    step *= q;
  }
  g->dx = step;  // smallest spacing, adjacent to x_cut
  finish_grid(*g);
  return g;
}

PairedGrids make_paired_grids(double x_plus, double x_min_request,
                              double x_cut, int n_restricted) {
  if (!(x_min_request < x_plus) || !(x_plus < x_cut))
    throw ConfigError("make_paired_grids: need x_min < x_plus < x_cut");
  const double dx = (x_cut - x_plus) / (n_restricted + 1);
  const int k = static_cast<int>(std::ceil((x_plus - x_min_request) / dx));
  PairedGrids pair;
  pair.restricted = make_uniform_grid(x_plus, x_cut, n_restricted);
  pair.full = make_uniform_grid(x_plus - k * dx, x_cut, n_restricted + k);
  pair.offset = k;
  return pair;
}

double SpinorField::norm() const {
  double acc = 0.0;
  for (int j = 0; j < grid->n; ++j)
    acc += grid->w[j] * values.segment<4>(4 * j).squaredNorm();
  return std::sqrt(acc);
}

std::complex<double> SpinorField::inner(const SpinorField& other) const {
  if (!grid->same_as(*other.grid))
    throw ConfigError("SpinorField::inner: grid mismatch");
  std::complex<double> acc = 0.0;
  for (int j = 0; j < grid->n; ++j)
    acc += grid->w[j] *
           values.segment<4>(4 * j).dot(other.values.segment<4>(4 * j));
  return acc;
}

double SpinorField::norm_on_window(double a, double b) const {
  double acc = 0.0;
  for (int j = 0; j < grid->n; ++j)
    if (grid->x[j] >= a && grid->x[j] <= b)
      acc += grid->w[j] * values.segment<4>(4 * j).squaredNorm();
  return std::sqrt(acc);
}

double SpinorField::node_norm(int j) const {
  return values.segment<4>(4 * j).norm();
}

void SpinorField::normalize() {
  const double nrm = norm();
  if (nrm > 0.0) values /= nrm;
}

SpinorField extend_by_zero(const SpinorField& restricted, const PairedGrids& pair) {
  if (!restricted.grid->same_as(*pair.restricted))
    throw ConfigError("extend_by_zero: field not on the paired restricted grid");
  SpinorField full(pair.full);
  full.values.segment(4 * pair.offset, 4 * restricted.grid->n) = restricted.values;
  return full;
}

SpinorField random_field(GridPtr grid, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  SpinorField f(std::move(grid));
  for (int i = 0; i < f.values.size(); ++i)
    f.values[i] = std::complex<double>(dist(rng), dist(rng));
  f.normalize();
  return f;
}

}  // namespace sads
