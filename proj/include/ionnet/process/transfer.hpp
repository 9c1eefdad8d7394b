#pragma once

#include "ionnet/device/model.hpp"
#include "ionnet/process/metrics.hpp"
#include "ionnet/qcore/haar.hpp"

namespace ionnet::proc {

/// One-qubit network -> auxiliary transfer process built by contracting a
/// two-qubit iswap superoperator (qubit 0 = network, qubit 1 = auxiliary):
/// the auxiliary input is fed the prepared state tau_0, the network output
/// is contracted with the identity (plain) or with the down-outcome readout
/// POVM element (error-detected), and the leftover phase rotation on the
/// transferred qubit is undone. The error-detected process is
/// non-trace-preserving.
struct TransferAnalysis {
  Superoperator transfer{2, Mat()};
  bool error_detected = false;
  double plain_fidelity = 0.0;  // (d + tr S)/(d(d+1)); meaningful in plain mode
};

inline TransferAnalysis build_transfer_superop(const Superoperator& s_iswap,
                                               const device::PrepErrorModel& prep,
                                               const device::ReadoutErrorModel* detect = nullptr) {
  if (s_iswap.dim != 4) throw std::invalid_argument("build_transfer_superop: need a 2-qubit process");

  Mat tau = Mat::Zero(2, 2);
  tau(0, 0) = 1.0 - prep.eps;
  tau(1, 1) = prep.eps;

  Mat m_down = identity(2);
  if (detect) {
    m_down(0, 0) = 1.0 - detect->eps0;
    m_down(1, 1) = detect->eps1;
  }

  // embed: |rho_N>> -> |rho_N>> (x) |tau>>, in the (vec_N, vec_X) layout
  const Mat e_in = tensor(Mat(identity(4)), Mat(vectorize(tau)));
  // contract the network output with <<M|, keep the auxiliary factor
  const Mat c_out = tensor(Mat(vectorize(m_down).adjoint()), Mat(identity(4)));
  const Mat& p = ravel2();
  const Mat s_corr = unitary_to_superop(phase_s().adjoint()).matrix;

  TransferAnalysis out;
  out.error_detected = detect != nullptr;
  out.transfer =
      Superoperator{2, s_corr * c_out * p.transpose() * s_iswap.matrix * p * e_in};
  out.plain_fidelity = (2.0 + out.transfer.matrix.trace().real()) / 6.0;
  return out;
}

struct EdMetrics {
  double f_bar = 0.0;       // mean post-selected transfer fidelity
  double f_bar_se = 0.0;    // Monte-Carlo standard error
  double p_bar = 0.0;       // mean detection probability
  double p_bar_se = 0.0;
  int samples = 0;
};

/// Haar-averaged error-detected transfer metrics. The per-state
/// renormalization sits inside the mean (a ratio per sample, not a ratio of
/// means) because the detection probability depends on the input state.
inline EdMetrics monte_carlo_ed_metrics(const TransferAnalysis& analysis, int n_samples,
                                        RngStream& rng) {
  if (!analysis.error_detected)
    throw std::invalid_argument("monte_carlo_ed_metrics: analysis not built in error-detected mode");
  if (n_samples < 100)
    throw std::invalid_argument("monte_carlo_ed_metrics: need at least 100 samples for a CI");
  double sum_f = 0.0, sum_f2 = 0.0, sum_t = 0.0, sum_t2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const PureState psi = haar_sample(2, rng);
    const DensityMatrix out = superop_apply(analysis.transfer, projector(psi));
    const double t = out.trace().real();
    const double f = std::real(psi.dot(out * psi)) / t;
    sum_f += f;
    sum_f2 += f * f;
    sum_t += t;
    sum_t2 += t * t;
  }
  EdMetrics m;
  m.samples = n_samples;
  m.f_bar = sum_f / n_samples;
  m.p_bar = 1.0 - sum_t / n_samples;
  const double var_f = std::max(0.0, sum_f2 / n_samples - m.f_bar * m.f_bar);
  const double mean_t = sum_t / n_samples;
  const double var_t = std::max(0.0, sum_t2 / n_samples - mean_t * mean_t);
  m.f_bar_se = std::sqrt(var_f / n_samples);
  m.p_bar_se = std::sqrt(var_t / n_samples);
  return m;
}

/// Benchmarks that pin down the calibrated iswap process model.
struct TransferBenchmarks {
  double iswap_avg_fidelity = 1.0;
  double plain_fidelity = 1.0;
  double ed_fidelity = 1.0;
  double ed_abort = 0.0;
  double prep_eps = 0.0;  // auxiliary preparation error
  double ro_eps0 = 0.0;   // network readout errors
  double ro_eps1 = 0.0;
};

inline TransferBenchmarks transfer_benchmarks(const device::ModuleModel& m) {
  TransferBenchmarks b;
  b.iswap_avg_fidelity = m.gate("iswap").avg_fidelity;
  b.plain_fidelity = m.transfer_plain_fidelity;
  b.ed_fidelity = m.transfer_ed_fidelity;
  b.ed_abort = m.transfer_ed_abort;
  b.prep_eps = m.prep(device::QubitRole::Auxiliary).eps;
  b.ro_eps0 = m.readout(device::QubitRole::Network).eps0;
  b.ro_eps1 = m.readout(device::QubitRole::Network).eps1;
  return b;
}

/// Builds the Pauli-noise iswap process whose transfer metrics reproduce the
/// four benchmarks exactly, given the module's preparation and readout
/// errors. The four benchmarks fix four aggregate Pauli weights:
///   a    = I (x) I
///   zeta = Z_N (x) I            (undetected, harmless to the transfer)
///   b    = {X,Y}_N (x) I        (detected, transfer intact if it leaks)
///   beta = {X,Y}_N (x) {X,Y,Z}_X
///   g    = {I,Z}_N (x) {X,Y,Z}_X (undetected transfer errors)
/// Weights inside each class are not identifiable from the benchmarks and
/// are split evenly.
inline QuantumChannel calibrated_iswap_channel(const TransferBenchmarks& bm) {
  const double eps = bm.prep_eps;
  const double e0 = bm.ro_eps0;
  const double e1 = bm.ro_eps1;

  const double a = (5.0 * bm.iswap_avg_fidelity - 1.0) / 4.0;
  const double f_pro_plain = (3.0 * bm.plain_fidelity - 1.0) / 2.0;
  const double pass = 1.0 - bm.ed_abort;
  const double numer = bm.ed_fidelity * pass;

  // Unknowns x = (zeta, b, beta, g). Equations, with the known a moved to
  // the right-hand side:
  //   plain:     (1-eps)(a + zeta + b) + eps (beta + g)/3            = f_pro_plain
  //   pass prob: cA (a + zeta + g) + cB (b + beta)                   = pass
  //   numerator: cz (a + zeta) + cb b + cbeta beta + cg g            = numer
  //   total:     a + zeta + b + beta + g                             = 1
  // where cA/cB are the pass weights of the undetected/detected classes and
  // cz/cb/cbeta/cg fold in the Haar mean 1/3 of |<psi|P|psi>|^2 per leftover
  // Pauli on the transferred qubit.
  const double ca = (1 - eps) * (1 - e0) + eps * e1;
  const double cb_pass = (1 - eps) * e1 + eps * (1 - e0);
  const double cz = (1 - eps) * (1 - e0) + eps * e1 / 3.0;
  const double cb = (1 - eps) * e1 + eps * (1 - e0) / 3.0;
  const double cbeta = (1 - eps) * e1 / 3.0 + eps * (1 - e0) * 5.0 / 9.0;
  const double cg = (1 - eps) * (1 - e0) / 3.0 + eps * e1 * 5.0 / 9.0;

  Eigen::Matrix4d m;
  m << (1 - eps), (1 - eps), eps / 3.0, eps / 3.0,
       ca, cb_pass, cb_pass, ca,
       cz, cb, cbeta, cg,
       1, 1, 1, 1;
  Eigen::Vector4d rhs;
  rhs << f_pro_plain - (1 - eps) * a, pass - ca * a, numer - cz * a, 1.0 - a;

  const Eigen::Vector4d x = m.fullPivLu().solve(rhs);
  const double zeta = x(0), b = x(1), beta = x(2), g = x(3);
  const double tol = -1e-9;
  if (a < tol || zeta < tol || b < tol || beta < tol || g < tol)
    throw std::invalid_argument(
        "calibrated_iswap_channel: benchmarks are inconsistent (negative Pauli weight)");

  std::vector<double> w(16, 0.0);
  auto set = [&](int pn, int px, double v) { w[pn + 4 * px] = std::max(0.0, v); };
  set(0, 0, a);
  set(3, 0, zeta);
  set(1, 0, b / 2.0);
  set(2, 0, b / 2.0);
  for (int px : {1, 2, 3}) {
    set(1, px, beta / 6.0);
    set(2, px, beta / 6.0);
    set(0, px, g / 6.0);
    set(3, px, g / 6.0);
  }
  double norm = 0.0;
  for (double v : w) norm += v;
  for (double& v : w) v /= norm;

  QuantumChannel noise = pauli_channel(2, w);
  QuantumChannel ch;
  ch.kraus.reserve(noise.kraus.size());
  for (const Mat& k : noise.kraus) ch.kraus.push_back(k * iswap());
  return ch;
}

}  // namespace ionnet::proc
