#pragma once

#include "ionnet/tomo/settings.hpp"

#include <map>
#include <vector>

namespace ionnet::tomo {

/// Counted outcomes per measurement setting plus the readout models the
/// POVMs are built from.
struct TomographyDataset {
  int n_qubits = 0;
  std::vector<device::ReadoutErrorModel> readout;  // one per qubit
  // setting key (MeasurementSetting::encode) -> counts per outcome index
  std::map<std::uint32_t, std::vector<std::uint32_t>> counts;

  std::uint64_t total_shots() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : counts)
      for (std::uint32_t c : v) n += c;
    return n;
  }

  void add(const MeasurementSetting& setting, int outcome_index) {
    auto& v = counts[setting.encode()];
    if (v.empty()) v.assign(Eigen::Index{1} << n_qubits, 0);
    ++v[static_cast<std::size_t>(outcome_index)];
  }
};

struct MleOptions {
  int max_iterations = 2000;
  double log_likelihood_tol = 1e-10;
  double probability_clamp = 1e-12;
};

struct ReconstructionResult {
  DensityMatrix rho_hat;
  std::vector<double> log_likelihood;  // one entry per accepted iterate
  int iterations = 0;
  bool converged = false;
  int clamped_probabilities = 0;  // zero-probability outcomes with counts, regularized
};

namespace detail {

struct MleTerm {
  Mat povm;
  double count;
};

inline std::vector<MleTerm> collect_terms(const TomographyDataset& data) {
  std::vector<MleTerm> terms;
  for (const auto& [key, counts] : data.counts) {
    const MeasurementSetting setting = MeasurementSetting::decode(key, data.n_qubits);
    const std::vector<Mat> povm = build_povm(setting, data.readout);
    for (std::size_t j = 0; j < counts.size(); ++j)
      if (counts[j] > 0) terms.push_back(MleTerm{povm[j], static_cast<double>(counts[j])});
  }
  return terms;
}

/// The measurement map determines rho iff the POVM elements span the full
/// operator space.
inline bool informationally_complete(const TomographyDataset& data) {
  const Eigen::Index dim = Eigen::Index{1} << data.n_qubits;
  const Eigen::Index d2 = dim * dim;
  Mat gram = Mat::Zero(d2, d2);
  for (const auto& [key, counts] : data.counts) {
    (void)counts;
    const MeasurementSetting setting = MeasurementSetting::decode(key, data.n_qubits);
    for (const Mat& m : build_povm(setting, data.readout)) {
      const Vec v = vectorize(m);
      gram += v * v.adjoint();
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (top <= 0.0) return false;
  return es.eigenvalues().minCoeff() > 1e-9 * top;
}

}  // namespace detail

/// Iterative diluted maximum-likelihood reconstruction:
///   R(rho) = (1/N) sum n_ij / p_ij M_ij,
///   rho <- (I + lambda R) rho (I + lambda R) / norm,
/// with lambda = 1 and halving whenever the step would lower the
/// log-likelihood, which keeps the trace non-decreasing.
inline ReconstructionResult mle_reconstruct(const TomographyDataset& data,
                                            const MleOptions& opts = {}) {
  const Eigen::Index dim = Eigen::Index{1} << data.n_qubits;
  if (data.counts.empty()) throw std::invalid_argument("mle_reconstruct: empty dataset");
  if (!detail::informationally_complete(data))
    throw std::invalid_argument("mle_reconstruct: dataset is not informationally complete");

  const std::vector<detail::MleTerm> terms = detail::collect_terms(data);
  double n_total = 0.0;
  for (const auto& t : terms) n_total += t.count;

  ReconstructionResult out;
  out.rho_hat = identity(dim) / static_cast<double>(dim);

  auto log_likelihood = [&](const DensityMatrix& rho, int* clamps) {
    double ll = 0.0;
    for (const auto& t : terms) {
      double p = std::real((t.povm * rho).trace());
      if (p < opts.probability_clamp) {
        p = opts.probability_clamp;
        if (clamps) ++*clamps;
      }
      ll += t.count * std::log(p);
    }
    return ll;
  };

  double ll = log_likelihood(out.rho_hat, nullptr);
  out.log_likelihood.push_back(ll);

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    Mat r = Mat::Zero(dim, dim);
    for (const auto& t : terms) {
      double p = std::real((t.povm * out.rho_hat).trace());
      if (p < opts.probability_clamp) {
        p = opts.probability_clamp;
        ++out.clamped_probabilities;
      }
      r += (t.count / p) * t.povm;
    }
    r /= n_total;

    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      const Mat g = identity(dim) + lambda * r;
      DensityMatrix cand = g * out.rho_hat * g.adjoint();
      cand = 0.5 * (cand + cand.adjoint());
      cand /= cand.trace().real();
      const double ll_new = log_likelihood(cand, nullptr);
      if (ll_new >= ll) {
        const bool tiny = (ll_new - ll) < opts.log_likelihood_tol;
        out.rho_hat = cand;
        ll = ll_new;
        out.log_likelihood.push_back(ll);
        out.iterations = iter + 1;
        accepted = true;
        if (tiny) out.converged = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      // no ascent direction left at any step size
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }
  return out;
}

}  // namespace ionnet::tomo
