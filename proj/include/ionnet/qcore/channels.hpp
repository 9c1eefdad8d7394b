#pragma once

#include "ionnet/qcore/linalg.hpp"
#include "ionnet/qcore/ops.hpp"

#include <utility>
#include <vector>

namespace ionnet {

/// Completely positive map in operator-sum form. `trace_preserving` is a
/// declared property: sum K^dag K = I for TP channels, <= I otherwise.
struct QuantumChannel {
  std::vector<Mat> kraus;
  bool trace_preserving = true;

  Eigen::Index dim_in() const { return kraus.empty() ? 0 : kraus.front().cols(); }
  Eigen::Index dim_out() const { return kraus.empty() ? 0 : kraus.front().rows(); }

  /// max |sum K^dag K - I|; for non-TP channels the signed excess above I.
  double completeness_defect() const {
    Mat s = Mat::Zero(dim_in(), dim_in());
    for (const Mat& k : kraus) s += k.adjoint() * k;
    if (trace_preserving) return (s - identity(dim_in())).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat> es(s - identity(dim_in()), Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
  }
};

/// Channel as a matrix on column-vectorized operators.
struct Superoperator {
  Eigen::Index dim = 0;  // Hilbert-space dimension; matrix is dim^2 x dim^2
  Mat matrix;

  bool is_trace_preserving(double tol = 1e-9) const;
};

/// Column-stacking vectorization; with Eigen's column-major storage this is
/// a straight copy of the coefficients.
inline Vec vectorize(const Mat& a) {
  return Eigen::Map<const Vec>(a.data(), a.size());
}

inline Mat unvectorize(const Vec& v, Eigen::Index dim) {
  return Eigen::Map<const Mat>(v.data(), dim, dim);
}

/// S = sum conj(K) (x) K, so that S vec(rho) = vec(sum K rho K^dag).
inline Superoperator kraus_to_superop(const QuantumChannel& ch) {
  const Eigen::Index d_in = ch.dim_in();
  const Eigen::Index d_out = ch.dim_out();
  Mat s = Mat::Zero(d_out * d_out, d_in * d_in);
  for (const Mat& k : ch.kraus) s += tensor(k.conjugate(), k);
  return Superoperator{d_out, std::move(s)};
}

inline Superoperator unitary_to_superop(const Mat& u) {
  return Superoperator{u.rows(), tensor(u.conjugate(), u)};
}

inline bool Superoperator::is_trace_preserving(double tol) const {
  const Vec id = vectorize(identity(dim));
  return ((id.adjoint() * matrix).adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

inline DensityMatrix superop_apply(const Superoperator& s, const DensityMatrix& rho) {
  return unvectorize(s.matrix * vectorize(rho), s.dim);
}

inline Superoperator superop_compose(const Superoperator& after, const Superoperator& before) {
  return Superoperator{after.dim, after.matrix * before.matrix};
}

/// rho <- sum K rho K^dag applied on `targets` of a larger register. For
/// non-trace-preserving channels the result is sub-normalized.
inline DensityMatrix apply_channel(const DensityMatrix& rho, const QuantumChannel& ch,
                                   const std::vector<int>& targets) {
  const int n = qubit_count(rho.rows());
  if ((Eigen::Index{1} << targets.size()) != ch.dim_in())
    throw std::invalid_argument("apply_channel: channel dimension does not match target count");
  DensityMatrix out = Mat::Zero(rho.rows(), rho.cols());
  for (const Mat& k : ch.kraus) {
    const Mat full = embed(k, targets, n);
    out += full * rho * full.adjoint();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard channels

/// rho -> (1-p) rho + p I/d, as a uniform Pauli mixture.
inline QuantumChannel depolarizing_channel(int n_qubits, double p) {
  const Eigen::Index d2 = Eigen::Index{1} << (2 * n_qubits);
  QuantumChannel ch;
  const double w_id = 1.0 - p * static_cast<double>(d2 - 1) / static_cast<double>(d2);
  const double w_err = p / static_cast<double>(d2);
  for (Eigen::Index idx = 0; idx < d2; ++idx) {
    Mat op = Mat::Identity(1, 1);
    Eigen::Index rem = idx;
    for (int q = 0; q < n_qubits; ++q) {
      op = tensor(op, pauli(static_cast<int>(rem % 4)));
      rem /= 4;
    }
    ch.kraus.push_back(std::sqrt(idx == 0 ? w_id : w_err) * op);
  }
  return ch;
}

/// Z error with probability (1 - gamma) / 2: multiplies coherences by gamma.
inline QuantumChannel dephasing_channel(double gamma) {
  QuantumChannel ch;
  ch.kraus.push_back(std::sqrt((1.0 + gamma) / 2.0) * pauli_i());
  ch.kraus.push_back(std::sqrt((1.0 - gamma) / 2.0) * pauli_z());
  return ch;
}

inline QuantumChannel amplitude_damping_channel(double gamma) {
  Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel{{k0, k1}, true};
}

/// Mixture of Pauli errors applied after the identity; weights must sum to 1.
/// `weights[idx]`: base-4 digits of idx select the Pauli per qubit, lowest
/// digit = qubit 0 (the most significant register bit).
inline QuantumChannel pauli_channel(int n_qubits, const std::vector<double>& weights) {
  const Eigen::Index d2 = Eigen::Index{1} << (2 * n_qubits);
  if (static_cast<Eigen::Index>(weights.size()) != d2)
    throw std::invalid_argument("pauli_channel: need 4^n weights");
  QuantumChannel ch;
  for (Eigen::Index idx = 0; idx < d2; ++idx) {
    if (weights[idx] == 0.0) continue;
    if (weights[idx] < 0.0) throw std::invalid_argument("pauli_channel: negative weight");
    Mat op = Mat::Identity(1, 1);
    Eigen::Index rem = idx;
    for (int q = 0; q < n_qubits; ++q) {
      op = tensor(op, pauli(static_cast<int>(rem % 4)));
      rem /= 4;
    }
    ch.kraus.push_back(std::sqrt(weights[idx]) * op);
  }
  return ch;
}

/// Noisy unitary: ideal gate followed by depolarizing noise on its targets.
inline QuantumChannel noisy_unitary_channel(const Mat& u, double depol_p) {
  const int n = qubit_count(u.rows());
  QuantumChannel depol = depolarizing_channel(n, depol_p);
  QuantumChannel ch;
  ch.kraus.reserve(depol.kraus.size());
  for (const Mat& k : depol.kraus) ch.kraus.push_back(k * u);
  return ch;
}

/// Depolarizing mixing probability that reproduces a target average gate
/// fidelity on d = 2^n dimensions: F_avg = 1 - p (d-1)/d.
inline double depol_p_for_avg_fidelity(double f_avg, int n_qubits) {
  const double d = static_cast<double>(Eigen::Index{1} << n_qubits);
  return (1.0 - f_avg) * d / (d - 1.0);
}

// ---------------------------------------------------------------------------
// Two-qubit vectorization reshuffling

/// Permutation P with P (|A>> (x) |B>>) = |A (x) B>> for one-qubit operators
/// A, B under column stacking.
inline const Mat& ravel2() {
  static const Mat p = [] {
    Mat m = Mat::Zero(16, 16);
    for (int c1 = 0; c1 < 2; ++c1)
      for (int c2 = 0; c2 < 2; ++c2)
        for (int r1 = 0; r1 < 2; ++r1)
          for (int r2 = 0; r2 < 2; ++r2) {
            const int v = (2 * c1 + c2) * 4 + (2 * r1 + r2);  // vec(A (x) B)
            const int w = (2 * c1 + r1) * 4 + (2 * c2 + r2);  // |A>> (x) |B>>
            m(v, w) = 1.0;
          }
    return m;
  }();
  return p;
}

}  // namespace ionnet
