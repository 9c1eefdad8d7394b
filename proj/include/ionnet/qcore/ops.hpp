#pragma once

#include "ionnet/qcore/linalg.hpp"

namespace ionnet {

inline const Mat& pauli_i() {
  static const Mat m = Mat::Identity(2, 2);
  return m;
}
inline const Mat& pauli_x() {
  static const Mat m = [] {
    Mat p(2, 2);
    p << 0, 1, 1, 0;
    return p;
  }();
  return m;
}
inline const Mat& pauli_y() {
  static const Mat m = [] {
    Mat p(2, 2);
    p << cx(0, 0), cx(0, -1), cx(0, 1), cx(0, 0);
    return p;
  }();
  return m;
}
inline const Mat& pauli_z() {
  static const Mat m = [] {
    Mat p(2, 2);
    p << 1, 0, 0, -1;
    return p;
  }();
  return m;
}

inline const Mat& pauli(int k) {
  switch (k) {
    case 0: return pauli_i();
    case 1: return pauli_x();
    case 2: return pauli_y();
    default: return pauli_z();
  }
}

/// exp(-i theta/2 (cos(axis) X + sin(axis) Y)): rotation about an equatorial
/// Bloch axis at angle `axis` from X.
inline Mat rot_xy(double axis, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Mat u(2, 2);
  u << cx(c, 0), -cx(0, s) * std::polar(1.0, -axis),
       -cx(0, s) * std::polar(1.0, axis), cx(c, 0);
  return u;
}

inline Mat rot_x(double theta) { return rot_xy(0.0, theta); }
inline Mat rot_y(double theta) { return rot_xy(1.5707963267948966, theta); }

inline Mat rot_z(double theta) {
  Mat u = Mat::Zero(2, 2);
  u(0, 0) = std::polar(1.0, -theta / 2.0);
  u(1, 1) = std::polar(1.0, theta / 2.0);
  return u;
}

inline const Mat& phase_s() {
  static const Mat m = [] {
    Mat s = Mat::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = cx(0, 1);
    return s;
  }();
  return m;
}

inline const Mat& cnot() {
  static const Mat m = [] {
    Mat u = Mat::Zero(4, 4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
    return u;
  }();
  return m;
}

/// diag-basis |00>,|01>,|10>,|11>; swaps the qubits and imprints i on the
/// exchanged single-excitation amplitudes.
inline const Mat& iswap() {
  static const Mat m = [] {
    Mat u = Mat::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 2) = cx(0, 1);
    u(2, 1) = cx(0, 1);
    u(3, 3) = 1.0;
    return u;
  }();
  return m;
}

inline PureState basis_state(int n_qubits, Eigen::Index index) {
  PureState v = Vec::Zero(Eigen::Index{1} << n_qubits);
  v(index) = 1.0;
  return v;
}

inline const PureState& bell_phi_plus() {
  static const PureState psi = make_target_state(2, 0.0);
  return psi;
}

}  // namespace ionnet
