#pragma once

#include "sads/grid.hpp"
#include "sads/operators.hpp"

#include <cstdint>
#include <vector>

namespace sads {

/// Eigenvalue-eigenvector result; the vector is L2-normalized on its grid
/// and the residual is ||O v - lambda v|| in the same norm.
struct EigenPair {
  double value = 0.0;
  SpinorField vector;
  double residual = 0.0;
};

struct EigenSolveOptions {
  double tol = 1e-9;
  int max_basis = 220;          // Lanczos basis cap before giving up
  int check_every = 8;          // Ritz convergence check cadence
  int dense_cutoff = 900;       // full dense solve at or below this dimension
  std::uint64_t seed = 0x5AD5;  // deterministic start vector
};

/// k eigenpairs of a Hermitian operator nearest `shift`, by shift-invert
/// Lanczos with full reorthogonalization (sparse LU behind the inversion).
/// Returned sorted by |value - shift|.  Throws SolverError (carrying the
/// best residual) on non-convergence.
std::vector<EigenPair> eigen_solve(const HermitianOperator& op, double shift,
                                   int k, const EigenSolveOptions& opts = {});

}  // namespace sads
