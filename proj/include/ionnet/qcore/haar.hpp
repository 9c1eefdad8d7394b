#pragma once

#include "ionnet/qcore/linalg.hpp"
#include "ionnet/qcore/rng.hpp"

namespace ionnet {

/// Haar-distributed pure state: complex Gaussian vector, normalized.
inline PureState haar_sample(Eigen::Index dim, RngStream& rng) {
  if (dim < 2) throw std::invalid_argument("haar_sample: dim must be >= 2");
  PureState psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) psi(i) = cx(rng.gaussian(), rng.gaussian());
  psi /= psi.norm();
  return psi;
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the standard
/// phase fix on R's diagonal.
inline Mat haar_unitary(Eigen::Index dim, RngStream& rng) {
  Mat g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = cx(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const cx d = r(i, i);
    q.col(i) *= (d == cx(0, 0)) ? cx(1, 0) : d / std::abs(d);
  }
  return q;
}

}  // namespace ionnet
