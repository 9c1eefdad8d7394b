#pragma once

#include "ionnet/io/config.hpp"
#include "ionnet/qcore/channels.hpp"
#include "ionnet/qcore/ops.hpp"
#include "ionnet/qcore/rng.hpp"

#include <map>
#include <string>

namespace ionnet::device {

enum class QubitRole { Network, Circuit, Auxiliary };

inline const char* role_name(QubitRole r) {
  switch (r) {
    case QubitRole::Network: return "network";
    case QubitRole::Circuit: return "circuit";
    default: return "auxiliary";
  }
}

struct ReadoutErrorModel {
  double eps0 = 0.0;  // P(read 1 | prepared 0)
  double eps1 = 0.0;  // P(read 0 | prepared 1)
};

struct PrepErrorModel {
  double eps = 0.0;  // P(prepared 1 instead of 0)
};

enum class GateNoiseKind { DepolarizingAfter, DephasingAfter };

struct GateSpec {
  std::string name;
  Mat ideal_unitary;
  double duration_us = 0.0;
  double avg_fidelity = 1.0;
  GateNoiseKind noise_kind = GateNoiseKind::DepolarizingAfter;
};

struct StorageModel {
  double network_pair_decay_ms = 44.0;
  double network_t1_ms = 390.0;
  double circuit_pair_decay_s = 14.0;
  double auxiliary_dephasing_single_ms = 300.0;
  std::vector<double> dd_thresholds_ms;
  std::vector<double> dd_pulses;

  /// Single-qubit dephasing constant per role. For the network role the
  /// constant is chosen so that the *pair* coherence (two qubits dephasing
  /// plus amplitude damping) decays with network_pair_decay_ms.
  double dephasing_single_ms(QubitRole role) const {
    switch (role) {
      case QubitRole::Network: {
        const double rate = 1.0 / network_pair_decay_ms - 1.0 / network_t1_ms;
        return 2.0 / rate;
      }
      case QubitRole::Circuit: return 2.0 * circuit_pair_decay_s * 1e3;
      default: return auxiliary_dephasing_single_ms;
    }
  }

  int ur_pulses_for(double duration_ms) const {
    for (std::size_t i = 0; i < dd_thresholds_ms.size(); ++i)
      if (duration_ms <= dd_thresholds_ms[i]) return static_cast<int>(dd_pulses[i]);
    return dd_pulses.empty() ? 0 : static_cast<int>(dd_pulses.back());
  }
};

/// Simulation clock in microseconds.
struct Clock {
  double us = 0.0;
  void advance(double dt_us) { us += dt_us; }
};

struct ModuleModel {
  std::string name;
  ReadoutErrorModel readout_network, readout_circuit, readout_auxiliary;
  PrepErrorModel prep_network, prep_circuit, prep_auxiliary;
  double clifford_error_network = 0.0, clifford_error_circuit = 0.0,
         clifford_error_auxiliary = 0.0;
  std::map<std::string, GateSpec> gates;
  StorageModel storage;
  double hyperfine_transfer_error = 0.0;
  double hyperfine_transfer_duration_us = 0.0;
  double iswap_extra_flip_error = 0.0;
  double mid_readout_duration_us = 500.0;
  double single_qubit_gate_duration_us = 10.0;
  // transfer-process benchmarks consumed by the transfer analysis
  double transfer_plain_fidelity = 1.0;
  double transfer_ed_fidelity = 1.0;
  double transfer_ed_abort = 0.0;

  const ReadoutErrorModel& readout(QubitRole r) const {
    switch (r) {
      case QubitRole::Network: return readout_network;
      case QubitRole::Circuit: return readout_circuit;
      default: return readout_auxiliary;
    }
  }
  const PrepErrorModel& prep(QubitRole r) const {
    switch (r) {
      case QubitRole::Network: return prep_network;
      case QubitRole::Circuit: return prep_circuit;
      default: return prep_auxiliary;
    }
  }
  double clifford_error(QubitRole r) const {
    switch (r) {
      case QubitRole::Network: return clifford_error_network;
      case QubitRole::Circuit: return clifford_error_circuit;
      default: return clifford_error_auxiliary;
    }
  }
  const GateSpec& gate(const std::string& name) const {
    auto it = gates.find(name);
    if (it == gates.end()) throw std::invalid_argument("unknown gate: " + name);
    return it->second;
  }

  static ModuleModel from_config(const io::Config& cfg, const io::ModuleConfig& mc,
                                 const std::string& name) {
    ModuleModel m;
    m.name = name;
    m.prep_network = {mc.prep_error_network};
    m.prep_circuit = {mc.prep_error_circuit};
    m.prep_auxiliary = {mc.prep_error_auxiliary};
    m.readout_network = {mc.readout_error0_network, mc.readout_error1_network};
    m.readout_circuit = {mc.readout_error0_circuit, mc.readout_error1_circuit};
    m.readout_auxiliary = {mc.readout_error0_auxiliary, mc.readout_error1_auxiliary};
    m.clifford_error_network = mc.clifford_error_network;
    m.clifford_error_circuit = mc.clifford_error_circuit;
    m.clifford_error_auxiliary = mc.clifford_error_auxiliary;
    m.gates["cnot"] = GateSpec{"cnot", cnot(), mc.cnot_duration_us, mc.cnot_fidelity,
                               GateNoiseKind::DepolarizingAfter};
    m.gates["iswap"] = GateSpec{"iswap", iswap(), mc.iswap_duration_us, mc.iswap_fidelity,
                                GateNoiseKind::DepolarizingAfter};
    // iswap leaves the transferred amplitude S-rotated; the correction gate
    // removes the phase. Noise on it follows the auxiliary Clifford benchmark.
    m.gates["s_dagger"] = GateSpec{"s_dagger", phase_s().adjoint(),
                                   cfg.single_qubit_gate_duration_us,
                                   1.0 - mc.clifford_error_auxiliary,
                                   GateNoiseKind::DepolarizingAfter};
    m.storage.network_pair_decay_ms = cfg.network_pair_decay_ms;
    m.storage.network_t1_ms = cfg.network_t1_ms;
    m.storage.circuit_pair_decay_s = cfg.circuit_pair_decay_s;
    m.storage.auxiliary_dephasing_single_ms = cfg.auxiliary_dephasing_single_ms;
    m.storage.dd_thresholds_ms = cfg.dd_thresholds_ms;
    m.storage.dd_pulses = cfg.dd_pulses;
    m.hyperfine_transfer_error = mc.hyperfine_transfer_error;
    m.hyperfine_transfer_duration_us = mc.hyperfine_transfer_duration_us;
    m.iswap_extra_flip_error = mc.iswap_extra_flip_error;
    m.mid_readout_duration_us = cfg.mid_readout_duration_us;
    m.single_qubit_gate_duration_us = cfg.single_qubit_gate_duration_us;
    m.transfer_plain_fidelity = mc.transfer_plain_fidelity;
    m.transfer_ed_fidelity = mc.transfer_ed_fidelity;
    m.transfer_ed_abort = mc.transfer_ed_abort;
    return m;
  }
};

struct TwoModules {
  ModuleModel alice, bob;
  static TwoModules from_config(const io::Config& cfg) {
    return TwoModules{ModuleModel::from_config(cfg, cfg.alice, "alice"),
                      ModuleModel::from_config(cfg, cfg.bob, "bob")};
  }
};

// ---------------------------------------------------------------------------
// Operations

/// (1 - eps)|0><0| + eps|1><1| for the role's preparation error.
inline DensityMatrix prepare(const ModuleModel& m, QubitRole role) {
  const double eps = m.prep(role).eps;
  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = 1.0 - eps;
  rho(1, 1) = eps;
  return rho;
}

/// Ideal unitary followed by the gate's calibrated noise on its targets.
inline DensityMatrix apply_gate(const DensityMatrix& state, const ModuleModel& m,
                                const std::string& gate_name, const std::vector<int>& targets,
                                Clock* clock = nullptr) {
  const GateSpec& g = m.gate(gate_name);
  const int nq = qubit_count(g.ideal_unitary.rows());
  if (static_cast<int>(targets.size()) != nq)
    throw std::invalid_argument("apply_gate: target count does not match gate arity");
  DensityMatrix out = apply_unitary(state, g.ideal_unitary, targets);
  if (g.avg_fidelity < 1.0) {
    if (g.noise_kind == GateNoiseKind::DepolarizingAfter) {
      const double p = depol_p_for_avg_fidelity(g.avg_fidelity, nq);
      out = apply_channel(out, depolarizing_channel(nq, p), targets);
    } else {
      // avg fidelity of a dephasing channel: F = (2 + gamma + gamma^n...)
      // restricted here to single qubits: F = (2 + gamma)/3 per qubit.
      const double gamma = 3.0 * g.avg_fidelity - 2.0;
      for (int t : targets) out = apply_channel(out, dephasing_channel(gamma), {t});
    }
  }
  if (clock) clock->advance(g.duration_us);
  return out;
}

struct MeasureResult {
  int observed = 0;  // reported bit, after readout error
  int actual = 0;    // projected branch
  DensityMatrix state;
};

/// Projective measurement of one register qubit dressed with readout error:
/// the state collapses along the true projector branch, the reported outcome
/// is flipped with the corresponding readout error probability.
inline MeasureResult measure(const DensityMatrix& state, const ModuleModel& m, QubitRole role,
                             int target, RngStream& rng, Clock* clock = nullptr) {
  const int n = qubit_count(state.rows());
  Mat p1 = Mat::Zero(2, 2);
  p1(1, 1) = 1.0;
  const Mat proj1 = embed(p1, {target}, n);
  const double prob1 = std::max(0.0, std::min(1.0, (proj1 * state).trace().real()));
  const int actual = rng.uniform() <= prob1 ? 1 : 0;
  MeasureResult r;
  r.actual = actual;
  const Mat proj = actual ? proj1 : Mat(identity(state.rows()) - proj1);
  const double norm = (proj * state).trace().real();
  r.state = proj * state * proj / norm;
  const ReadoutErrorModel& ro = m.readout(role);
  const double flip = actual ? ro.eps1 : ro.eps0;
  r.observed = rng.bernoulli(flip) ? 1 - actual : actual;
  if (clock) clock->advance(m.mid_readout_duration_us);
  return r;
}

/// Identity map followed by single-qubit depolarizing noise at the
/// calibrated per-transfer error.
inline DensityMatrix hyperfine_transfer(const DensityMatrix& state, const ModuleModel& m,
                                        int target, Clock* clock = nullptr) {
  DensityMatrix out = state;
  if (m.hyperfine_transfer_error > 0.0)
    out = apply_channel(out, depolarizing_channel(1, m.hyperfine_transfer_error), {target});
  if (clock) clock->advance(m.hyperfine_transfer_duration_us);
  return out;
}

/// Idle decoherence for `duration_ms` on one register qubit: exponential
/// dephasing per role, plus amplitude damping for the network role.
inline DensityMatrix idle(const DensityMatrix& state, const ModuleModel& m, QubitRole role,
                          int target, double duration_ms, Clock* clock = nullptr) {
  if (duration_ms < 0.0) throw std::invalid_argument("idle: negative duration");
  if (duration_ms == 0.0) {
    if (clock) clock->advance(0.0);
    return state;
  }
  DensityMatrix out = state;
  const double t_deph = m.storage.dephasing_single_ms(role);
  out = apply_channel(out, dephasing_channel(std::exp(-duration_ms / t_deph)), {target});
  if (role == QubitRole::Network) {
    const double g = 1.0 - std::exp(-duration_ms / m.storage.network_t1_ms);
    out = apply_channel(out, amplitude_damping_channel(g), {target});
  }
  if (clock) clock->advance(duration_ms * 1e3);
  return out;
}

}  // namespace ionnet::device
