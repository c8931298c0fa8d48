#include "sads/eigensolve.hpp"

#include "sads/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

namespace sads {

namespace {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;
using Vec = Eigen::VectorXcd;

Vec random_start(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cd(dist(rng), dist(rng));
  v.normalize();
  return v;
}

SpinorField to_field(const HermitianOperator& op, const Vec& hatted) {
  SpinorField f(op.grid);
  f.values = hatted;
  if (!op.grid->uniform) {
    for (int j = 0; j < op.grid->n; ++j)
      f.values.segment<4>(4 * j) /= op.grid->sqrt_w[j];
  } else {
    // L2 weights are constant; rescale so the physical norm is 1.
    f.values /= std::sqrt(op.grid->dx);
  }
  return f;
}

std::vector<EigenPair> pack_results(const HermitianOperator& op,
                                    std::vector<std::pair<double, Vec>>& pairs,
                                    double shift, int k) {
  std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.first - shift) < std::abs(b.first - shift);
  });
  if (static_cast<int>(pairs.size()) > k) pairs.resize(k);
  std::vector<EigenPair> out;
  out.reserve(pairs.size());
  for (auto& [lambda, v] : pairs) {
    v.normalize();
    const double res = (op.mat * v - lambda * v).norm();
    EigenPair ep;
    ep.value = lambda;
    ep.vector = to_field(op, v);
    ep.residual = res;
    out.push_back(std::move(ep));
  }
  return out;
}

std::vector<EigenPair> dense_solve(const HermitianOperator& op, double shift, int k) {
  const Eigen::MatrixXcd dense(op.mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  if (es.info() != Eigen::Success)
    throw SolverError("dense eigensolver failed", 1.0);
  std::vector<std::pair<double, Vec>> pairs;
  for (Eigen::Index i = 0; i < dense.rows(); ++i)
    pairs.emplace_back(es.eigenvalues()[i], es.eigenvectors().col(i));
  return pack_results(op, pairs, shift, k);
}

}  // namespace

std::vector<EigenPair> eigen_solve(const HermitianOperator& op, double shift,
                                   int k, const EigenSolveOptions& opts) {
  const Eigen::Index dim = op.mat.rows();
  if (k < 1) throw ConfigError("eigen_solve: k must be >= 1");
  if (k > dim) throw ConfigError("eigen_solve: k exceeds operator dimension");
  if (dim <= opts.dense_cutoff) return dense_solve(op, shift, k);

  // Factor (O - shift I); nudge the shift if it lands on an eigenvalue.
  SpMat shifted = op.mat;
  Eigen::SparseLU<SpMat> lu;
  double sigma = shift;
  for (int attempt = 0;; ++attempt) {
    SpMat id(dim, dim);
    id.setIdentity();
    shifted = op.mat - sigma * id;
    lu.compute(shifted);
    if (lu.info() == Eigen::Success) break;
    if (attempt >= 5)
      throw SolverError("eigen_solve: shifted factorization failed", 1.0);
    sigma += (1.0 + std::abs(sigma)) * 1e-9 * std::pow(4.0, attempt);
  }

  const int m_cap = static_cast<int>(std::min<Eigen::Index>(opts.max_basis, dim));
  std::vector<Vec> basis;
  basis.reserve(m_cap);
  std::vector<double> alpha, beta;  // T diagonal / subdiagonal
  basis.push_back(random_start(dim, opts.seed));

  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Vec>> converged;

  auto ritz_check = [&](bool final_round) -> bool {
    const int m = static_cast<int>(alpha.size());
    if (m < k) return false;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    // Largest |theta| of the inverted operator <-> eigenvalues nearest sigma.
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
    });
    converged.clear();
    double worst = 0.0;
    for (int t = 0; t < k; ++t) {
      const int idx = order[t];
      const double theta = es.eigenvalues()[idx];
      if (theta == 0.0) return false;
      Vec u = Vec::Zero(dim);
      for (int i = 0; i < m; ++i) u += es.eigenvectors()(i, idx) * basis[i];
      u.normalize();
      const double lambda = sigma + 1.0 / theta;
      const double res = (op.mat * u - lambda * u).norm();
      worst = std::max(worst, res);
      converged.emplace_back(lambda, std::move(u));
    }
    best_residual = std::min(best_residual, worst);
    if (worst <= opts.tol) return true;
    if (final_round) return false;
    converged.clear();
    return false;
  };

  for (int j = 0; j < m_cap; ++j) {
    Vec w = lu.solve(basis[j]);
    if (lu.info() != Eigen::Success)
      throw SolverError("eigen_solve: triangular solve failed", best_residual);
    const double a = std::real(basis[j].dot(w));
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& v : basis) w -= v.dot(w) * v;
    const double b = w.norm();
    if (b < 1e-13) {
      // Invariant subspace reached; whatever Ritz data we have is exact.
      if (ritz_check(true) && !converged.empty())
        return pack_results(op, converged, shift, k);
      break;
    }
    beta.push_back(b);
    if (j + 1 < m_cap) basis.push_back(w / b);
    if ((j + 1) % opts.check_every == 0 || j + 1 == m_cap) {
      if (ritz_check(false) && !converged.empty())
        return pack_results(op, converged, shift, k);
    }
  }
  throw SolverError("eigen_solve: no convergence after " +
                        std::to_string(m_cap) + " Lanczos steps",
                    best_residual);
}

}  // namespace sads
