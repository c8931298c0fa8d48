#include "sads/gamma.hpp"

#include <stdexcept>

namespace sads {

namespace {
using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 1, 0, 0, -1; break;
    case 2: s << 0, 1, 1, 0; break;
    case 3: s << 0, -I, I, 0; break;
    default: throw std::out_of_range("pauli index");
  }
  return s;
}
}  // namespace

GammaSet::GammaSet() {
  const Eigen::Matrix2cd s0 = pauli(0);
  gamma0.setZero();
  gamma0.block<2, 2>(0, 2) = I * s0;
  gamma0.block<2, 2>(2, 0) = -I * s0;
  Mat4* spatial[3] = {&gamma1, &gamma2, &gamma3};
  for (int k = 1; k <= 3; ++k) {
    Mat4& g = *spatial[k - 1];
    g.setZero();
    g.block<2, 2>(0, 2) = I * pauli(k);
    g.block<2, 2>(2, 0) = I * pauli(k);
  }
  gamma5 = -I * gamma0 * gamma1 * gamma2 * gamma3;
  gamma01 = gamma0 * gamma1;
  gamma02 = gamma0 * gamma2;
  gamma12 = gamma1 * gamma2;
}

const Mat4& GammaSet::gamma(int mu) const {
  switch (mu) {
    case 0: return gamma0;
    case 1: return gamma1;
    case 2: return gamma2;
    case 3: return gamma3;
    default: throw std::out_of_range("gamma index");
  }
}

KBasis::KBasis() {
  K << 1, 0, 1, 0,
       0, 1, 0, 1,
       1, 0, -1, 0,
       0, 1, 0, -1;
  K /= std::sqrt(2.0);
  D.setZero();
  D.diagonal() << I, -I, -I, I;
}

const GammaSet& gammas() {
  static const GammaSet g;
  return g;
}

const KBasis& k_basis() {
  static const KBasis k;
  return k;
}

}  // namespace sads
