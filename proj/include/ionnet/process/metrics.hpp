#pragma once

#include "ionnet/qcore/channels.hpp"

namespace ionnet::proc {

/// Average gate fidelity of a superoperator against an ideal unitary:
/// F = (d + tr S_rel) / (d (d + 1)) with S_rel the process expressed
/// relative to the ideal (identity when S == ideal).
inline double avg_gate_fidelity(const Superoperator& s, const Mat& u_ideal) {
  if (s.dim != u_ideal.rows()) throw std::invalid_argument("avg_gate_fidelity: dimension mismatch");
  const Mat s_rel = unitary_to_superop(u_ideal.adjoint()).matrix * s.matrix;
  const double d = static_cast<double>(s.dim);
  return (d + s_rel.trace().real()) / (d * (d + 1.0));
}

/// Choi matrix with the input factor slow: J[(i,r),(j,c)] = E(|i><j|)[r,c],
/// normalized so tr J = d for trace-preserving processes.
inline Mat choi_from_superop(const Superoperator& s) {
  const Eigen::Index d = s.dim;
  Mat j(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index jj = 0; jj < d; ++jj)
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
          j(i * d + r, jj * d + c) = s.matrix(c * d + r, jj * d + i);
  return j;
}

inline Superoperator superop_from_choi(const Mat& j) {
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(j.rows()))));
  Mat s(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index jj = 0; jj < d; ++jj)
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
          s(c * d + r, jj * d + i) = j(i * d + r, jj * d + c);
  return Superoperator{d, std::move(s)};
}

/// Diamond-norm proxy: half the trace norm of the normalized Choi difference.
inline double superop_distance(const Superoperator& a, const Superoperator& b) {
  if (a.dim != b.dim) throw std::invalid_argument("superop_distance: dimension mismatch");
  const Mat diff = (choi_from_superop(a) - choi_from_superop(b)) / static_cast<double>(a.dim);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace ionnet::proc
