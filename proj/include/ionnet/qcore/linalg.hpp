#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace ionnet {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// A density matrix is carried as a plain dense matrix; validity is a
/// property checked where it matters (construction sites, test oracles,
/// MLE iterates) rather than enforced by a wrapper type.
using DensityMatrix = Mat;
using PureState = Vec;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigTol = -1e-9;

inline int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw std::invalid_argument("dimension is not a power of two");
  return n;
}

/// Kronecker product with a's indices ordered before b's.
inline Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vec tensor(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Mat identity(Eigen::Index dim) { return Mat::Identity(dim, dim); }

inline bool is_hermitian(const Mat& m, double tol = kHermTol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_density_matrix(const Mat& m, double herm_tol = kHermTol,
                              double trace_tol = kTraceTol, double eig_tol = kEigTol) {
  if (m.rows() != m.cols()) return false;
  if (!is_hermitian(m, herm_tol)) return false;
  if (std::abs(m.trace().real() - 1.0) > trace_tol || std::abs(m.trace().imag()) > trace_tol)
    return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= eig_tol;
}

/// Expands a k-qubit operator acting on `targets` (register order, qubit 0
/// is the most significant bit) to the full register dimension.
inline Mat embed(const Mat& op, const std::vector<int>& targets, int n_qubits) {
  const int k = static_cast<int>(targets.size());
  if (op.rows() != (Eigen::Index{1} << k)) throw std::invalid_argument("operator/target count mismatch");
  for (int t : targets)
    if (t < 0 || t >= n_qubits) throw std::invalid_argument("target index out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Mat full = Mat::Zero(dim, dim);
  // Decompose each full index into (sub-index on targets, rest); the
  // operator mixes only the target bits.
  const Eigen::Index sub_dim = Eigen::Index{1} << k;
  std::vector<int> shift(k);
  for (int i = 0; i < k; ++i) shift[i] = n_qubits - 1 - targets[i];
  for (Eigen::Index r = 0; r < dim; ++r) {
    Eigen::Index r_sub = 0;
    for (int i = 0; i < k; ++i) r_sub = (r_sub << 1) | ((r >> shift[i]) & 1);
    Eigen::Index r_rest = r;
    for (int i = 0; i < k; ++i) r_rest &= ~(Eigen::Index{1} << shift[i]);
    for (Eigen::Index c_sub = 0; c_sub < sub_dim; ++c_sub) {
      if (op(r_sub, c_sub) == cx{0.0, 0.0}) continue;
      Eigen::Index c = r_rest;
      for (int i = 0; i < k; ++i)
        c |= ((c_sub >> (k - 1 - i)) & 1) << shift[i];
      full(r, c) = op(r_sub, c_sub);
    }
  }
  return full;
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& u,
                                   const std::vector<int>& targets) {
  const Mat full = embed(u, targets, qubit_count(rho.rows()));
  return full * rho * full.adjoint();
}

/// Reduced state on `keep` (ascending register indices), trace preserved.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const int n = qubit_count(rho.rows());
  std::vector<int> keep_sorted = keep;
  for (int q : keep_sorted)
    if (q < 0 || q >= n) throw std::invalid_argument("partial_trace: index out of range");
  std::vector<bool> kept(n, false);
  for (int q : keep_sorted) kept[q] = true;
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!kept[q]) traced.push_back(q);
  const int nk = static_cast<int>(keep_sorted.size());
  const int nt = n - nk;
  const Eigen::Index out_dim = Eigen::Index{1} << nk;
  const Eigen::Index tr_dim = Eigen::Index{1} << nt;
  auto compose = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
    Eigen::Index full = 0;
    for (int i = 0; i < nk; ++i)
      full |= ((kept_bits >> (nk - 1 - i)) & 1) << (n - 1 - keep_sorted[i]);
    for (int i = 0; i < nt; ++i)
      full |= ((traced_bits >> (nt - 1 - i)) & 1) << (n - 1 - traced[i]);
    return full;
  };
  DensityMatrix out = Mat::Zero(out_dim, out_dim);
  for (Eigen::Index r = 0; r < out_dim; ++r)
    for (Eigen::Index c = 0; c < out_dim; ++c)
      for (Eigen::Index t = 0; t < tr_dim; ++t)
        out(r, c) += rho(compose(r, t), compose(c, t));
  return out;
}

/// F = <psi| rho |psi>.
inline double fidelity_to_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.rows() != psi.size()) throw std::invalid_argument("fidelity_to_pure: dimension mismatch");
  return std::real(psi.dot(rho * psi));
}

/// (|0...0> + e^{i phi} |1...1>) / sqrt(2) on n >= 2 qubits.
inline PureState make_target_state(int n, double phi) {
  if (n < 2) throw std::invalid_argument("make_target_state: need at least 2 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  PureState psi = Vec::Zero(dim);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(dim - 1) = std::polar(1.0 / std::sqrt(2.0), phi);
  return psi;
}

inline DensityMatrix projector(const PureState& psi) { return psi * psi.adjoint(); }

}  // namespace ionnet
