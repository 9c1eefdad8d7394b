#pragma once

#include "ionnet/device/model.hpp"
#include "ionnet/qcore/ops.hpp"
#include "ionnet/qcore/rng.hpp"

#include <vector>

namespace ionnet::tomo {

/// Per-qubit analysis rotations applied before a computational-basis
/// readout. The identity appears twice so that a uniform draw allocates
/// equal statistics to the Z, X and Y axes; +/- variants make the set
/// over-complete.
inline constexpr int kNumRotations = 6;

inline const Mat& tomographic_rotation(int index) {
  static const std::vector<Mat> rots = [] {
    std::vector<Mat> r;
    r.push_back(identity(2));
    r.push_back(identity(2));
    r.push_back(rot_x(M_PI / 2.0));
    r.push_back(rot_y(M_PI / 2.0));
    r.push_back(rot_x(-M_PI / 2.0));
    r.push_back(rot_y(-M_PI / 2.0));
    return r;
  }();
  if (index < 0 || index >= kNumRotations) throw std::invalid_argument("rotation index out of range");
  return rots[static_cast<std::size_t>(index)];
}

inline const char* rotation_name(int index) {
  static const char* names[] = {"I", "I", "X+", "Y+", "X-", "Y-"};
  return names[index];
}

/// One composite measurement setting: a rotation index per qubit.
struct MeasurementSetting {
  std::vector<int> rotations;

  bool operator==(const MeasurementSetting& o) const { return rotations == o.rotations; }
  std::uint32_t encode() const {
    std::uint32_t k = 0;
    for (int r : rotations) k = k * kNumRotations + static_cast<std::uint32_t>(r);
    return k;
  }
  static MeasurementSetting decode(std::uint32_t key, int n_qubits) {
    MeasurementSetting s;
    s.rotations.assign(n_qubits, 0);
    for (int q = n_qubits - 1; q >= 0; --q) {
      s.rotations[q] = static_cast<int>(key % kNumRotations);
      key /= kNumRotations;
    }
    return s;
  }
};

/// Uniform i.i.d. settings plan over the per-qubit rotation set.
inline std::vector<MeasurementSetting> generate_settings(int n_qubits, int n_shots,
                                                         RngStream& rng) {
  if (n_shots < 0) throw std::invalid_argument("generate_settings: negative shot count");
  std::vector<MeasurementSetting> plan;
  plan.reserve(n_shots);
  for (int s = 0; s < n_shots; ++s) {
    MeasurementSetting ms;
    ms.rotations.reserve(n_qubits);
    for (int q = 0; q < n_qubits; ++q)
      ms.rotations.push_back(static_cast<int>(rng.uniform_int(kNumRotations)));
    plan.push_back(std::move(ms));
  }
  return plan;
}

/// Readout-error-dressed single-qubit POVM elements for one rotation.
///   M_down = (1-eps0) U^dag |0><0| U + eps1 U^dag |1><1| U
///   M_up   = (1-eps1) U^dag |1><1| U + eps0 U^dag |0><0| U
inline std::pair<Mat, Mat> single_qubit_povm(int rotation, const device::ReadoutErrorModel& ro) {
  const Mat& u = tomographic_rotation(rotation);
  const Mat p0 = u.adjoint() * projector(basis_state(1, 0)) * u;
  const Mat p1 = u.adjoint() * projector(basis_state(1, 1)) * u;
  return {(1.0 - ro.eps0) * p0 + ro.eps1 * p1, (1.0 - ro.eps1) * p1 + ro.eps0 * p0};
}

/// Composite POVM over all 2^N outcomes, tensored per qubit; element j uses
/// the bits of j (qubit 0 = most significant).
inline std::vector<Mat> build_povm(const MeasurementSetting& setting,
                                   const std::vector<device::ReadoutErrorModel>& readout) {
  const int n = static_cast<int>(setting.rotations.size());
  if (readout.size() != setting.rotations.size())
    throw std::invalid_argument("build_povm: one readout model per qubit required");
  std::vector<std::pair<Mat, Mat>> single(n);
  for (int q = 0; q < n; ++q) single[q] = single_qubit_povm(setting.rotations[q], readout[q]);
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<Mat> povm;
  povm.reserve(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Mat m = Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      const int bit = static_cast<int>((j >> (n - 1 - q)) & 1);
      m = tensor(m, bit ? single[q].second : single[q].first);
    }
    povm.push_back(std::move(m));
  }
  return povm;
}

}  // namespace ionnet::tomo
