#pragma once

#include <Eigen/Dense>
#include <complex>

namespace sads {

using Mat4 = Eigen::Matrix4cd;

/// Dirac matrices in the fixed representation
///   gamma0 = i [[0, s0], [-s0, 0]],  gammak = i [[0, sk], [sk, 0]]
/// with Pauli blocks s1 = diag(1,-1), s2 = [[0,1],[1,0]], s3 = [[0,-i],[i,0]],
/// plus the products the radial operator and its square are built from.
/// All entries are exact (0, +/-1, +/-i), so the Clifford relations hold
/// entrywise in floating point.
struct GammaSet {
  Mat4 gamma0, gamma1, gamma2, gamma3;
  Mat4 gamma5;   // -i g0 g1 g2 g3
  Mat4 gamma01;  // g0*g1 = diag(-1, 1, 1, -1)
  Mat4 gamma02;  // g0*g2
  Mat4 gamma12;  // g1*g2

  GammaSet();

  const Mat4& gamma(int mu) const;
};

/// Involution diagonalizing gamma1: gamma1 = K D K with K = K^{-1} and
/// D = diag(i, -i, -i, i).
struct KBasis {
  Mat4 K;
  Mat4 D;
  KBasis();
};

/// Shared immutable instances (built on first use).
const GammaSet& gammas();
const KBasis& k_basis();

}  // namespace sads
