#pragma once

#include "ionnet/process/metrics.hpp"
#include "ionnet/tomo/settings.hpp"

#include <vector>

namespace ionnet::proc {

/// Input states for process tomography: the per-qubit preparation set
/// induced by the tomographic rotation list, U_i^dag |0>.
inline DensityMatrix process_input_state(const tomo::MeasurementSetting& prep) {
  Mat rho = Mat::Identity(1, 1);
  for (int r : prep.rotations) {
    const Mat& u = tomo::tomographic_rotation(r);
    const Vec psi = u.adjoint() * basis_state(1, 0);
    rho = tensor(rho, Mat(projector(psi)));
  }
  return rho;
}

/// Counted outcomes per (input preparation, measurement setting) cell.
struct ProcessDataset {
  int n_qubits = 0;
  std::vector<device::ReadoutErrorModel> readout;
  struct Cell {
    std::uint32_t input_key = 0;
    std::uint32_t setting_key = 0;
    std::vector<std::uint32_t> counts;
  };
  std::vector<Cell> cells;

  std::uint64_t total_shots() const {
    std::uint64_t n = 0;
    for (const auto& c : cells)
      for (auto k : c.counts) n += k;
    return n;
  }
};

/// Samples the full input x setting grid with an even shot split (the
/// remainder goes to the leading cells).
inline ProcessDataset simulate_process_dataset(const QuantumChannel& channel, int n_qubits,
                                               const std::vector<device::ReadoutErrorModel>& readout,
                                               std::uint64_t shots_total, RngStream& rng) {
  ProcessDataset data;
  data.n_qubits = n_qubits;
  data.readout = readout;
  std::uint32_t n_keys = 1;
  for (int q = 0; q < n_qubits; ++q) n_keys *= tomo::kNumRotations;
  const std::uint64_t n_cells = static_cast<std::uint64_t>(n_keys) * n_keys;
  const std::uint64_t base = shots_total / n_cells;
  std::uint64_t remainder = shots_total % n_cells;

  const std::vector<int> targets = [&] {
    std::vector<int> t(n_qubits);
    for (int q = 0; q < n_qubits; ++q) t[q] = q;
    return t;
  }();

  std::uint64_t cell_index = 0;
  for (std::uint32_t ik = 0; ik < n_keys; ++ik) {
    const auto prep = tomo::MeasurementSetting::decode(ik, n_qubits);
    const DensityMatrix rho_out = apply_channel(process_input_state(prep), channel, targets);
    for (std::uint32_t sk = 0; sk < n_keys; ++sk, ++cell_index) {
      const auto setting = tomo::MeasurementSetting::decode(sk, n_qubits);
      const auto povm = tomo::build_povm(setting, readout);
      std::vector<double> probs(povm.size());
      for (std::size_t j = 0; j < povm.size(); ++j)
        probs[j] = std::max(0.0, std::real((povm[j] * rho_out).trace()));
      std::uint64_t shots = base + (remainder > 0 ? 1 : 0);
      if (remainder > 0) --remainder;
      ProcessDataset::Cell cell;
      cell.input_key = ik;
      cell.setting_key = sk;
      cell.counts.assign(povm.size(), 0);
      RngStream lane = rng.split(cell_index);
      for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = lane.uniform();
        double acc = 0.0;
        std::size_t outcome = povm.size() - 1;
        for (std::size_t j = 0; j < povm.size(); ++j) {
          acc += probs[j];
          if (u <= acc) {
            outcome = j;
            break;
          }
        }
        ++cell.counts[outcome];
      }
      data.cells.push_back(std::move(cell));
    }
  }
  return data;
}

struct ProcessMleOptions {
  int max_iterations = 500;
  double log_likelihood_tol = 1e-9;
  double probability_clamp = 1e-12;
};

struct ProcessReconstruction {
  Superoperator superop{0, Mat()};
  Mat choi;  // input factor slow, tr = d
  std::vector<double> log_likelihood;
  int iterations = 0;
  bool converged = false;
};

/// Maximum-likelihood Choi reconstruction with the trace-preserving
/// constraint kept by the two-sided normalization
///   J <- (L^-1 (x) I) R J R (L^-1 (x) I),  L = sqrt(tr_out R J R),
/// falling back to convex damping toward the previous iterate whenever a
/// full step would lower the likelihood. The TP constraint also makes the
/// per-input outcome probabilities sum to one, which keeps the likelihood a
/// proper multinomial.
inline ProcessReconstruction reconstruct_process(const ProcessDataset& data,
                                                 const ProcessMleOptions& opts = {}) {
  const Eigen::Index d = Eigen::Index{1} << data.n_qubits;
  const Eigen::Index d2 = d * d;

  struct Term {
    Mat op;  // rho_in^T (x) M_out
    double count;
  };
  std::vector<Term> terms;
  Mat gram = Mat::Zero(d2 * d2, d2 * d2);
  for (const auto& cell : data.cells) {
    const auto prep = tomo::MeasurementSetting::decode(cell.input_key, data.n_qubits);
    const auto setting = tomo::MeasurementSetting::decode(cell.setting_key, data.n_qubits);
    const Mat rho_t = process_input_state(prep).transpose();
    const auto povm = tomo::build_povm(setting, data.readout);
    for (std::size_t j = 0; j < povm.size(); ++j) {
      const Mat op = tensor(rho_t, povm[j]);
      const Vec v = vectorize(op);
      gram += v * v.adjoint();
      if (cell.counts[j] > 0) terms.push_back(Term{op, static_cast<double>(cell.counts[j])});
    }
  }
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (top <= 0.0 || es.eigenvalues().minCoeff() <= 1e-9 * top)
      throw std::invalid_argument("reconstruct_process: dataset is not informationally complete");
  }

  Mat j = tensor(Mat(identity(d)), Mat(identity(d) / static_cast<double>(d)));

  auto log_likelihood = [&](const Mat& jm) {
    double ll = 0.0;
    for (const auto& t : terms) {
      double p = std::real((t.op * jm).trace());
      if (p < opts.probability_clamp) p = opts.probability_clamp;
      ll += t.count * std::log(p);
    }
    return ll;
  };

  ProcessReconstruction out;
  double ll = log_likelihood(j);
  out.log_likelihood.push_back(ll);

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    Mat r = Mat::Zero(d2, d2);
    for (const auto& t : terms) {
      double p = std::real((t.op * j).trace());
      if (p < opts.probability_clamp) p = opts.probability_clamp;
      r += (t.count / p) * t.op;
    }
    Mat k = r * j * r;
    k = 0.5 * (k + k.adjoint());
    // partial trace over the output (fast) factor
    Mat l2 = Mat::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index o = 0; o < d; ++o) l2(a, b) += k(a * d + o, b * d + o);
    Eigen::SelfAdjointEigenSolver<Mat> es(l2);
    const Mat l_inv_sqrt = es.eigenvectors() *
                           es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                           es.eigenvectors().adjoint();
    const Mat lfull = tensor(l_inv_sqrt, Mat(identity(d)));
    Mat j_candidate = lfull * k * lfull;
    j_candidate = 0.5 * (j_candidate + j_candidate.adjoint());

    bool accepted = false;
    double mu = 1.0;
    for (int half = 0; half < 30; ++half) {
      Mat j_try = (1.0 - mu) * j + mu * j_candidate;
      const double ll_try = log_likelihood(j_try);
      if (ll_try >= ll) {
        const bool tiny = (ll_try - ll) < opts.log_likelihood_tol;
        j = std::move(j_try);
        ll = ll_try;
        out.log_likelihood.push_back(ll);
        out.iterations = iter + 1;
        accepted = true;
        if (tiny) out.converged = true;
        break;
      }
      mu *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }

  out.choi = j;
  out.superop = superop_from_choi(j);
  return out;
}

}  // namespace ionnet::proc
