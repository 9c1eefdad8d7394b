#pragma once

#include "ionnet/fit/fringe.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ionnet::tomo {

/// Aggregated partial-state-tomography data: one computational-basis block
/// and one block per analysis phase.
struct PstDataset {
  int n_qubits = 0;
  // population block
  std::uint64_t population_shots = 0;
  std::uint64_t population_all_same = 0;  // all-0 or all-1 outcomes
  // parity blocks
  struct PhaseBlock {
    double phi = 0.0;
    std::uint64_t shots = 0;
    std::uint64_t even_outcomes = 0;  // parity +1 (even number of 1 bits)
  };
  std::vector<PhaseBlock> phases;
};

struct ParityPopulationEstimate {
  double population = 0.0;  // P(all-0) + P(all-1)
  double population_se = 0.0;
  double contrast = 0.0;  // debiased fringe contrast
  double parity_phase = 0.0;
  double fidelity = 0.0;  // (P + C) / 2
  std::vector<double> phase_values;        // <parity> per phase
  std::vector<double> phase_errors;        // binomial standard errors
  std::vector<double> phase_grid;
  fit::FringeFit fringe;
};

/// Population / parity-fringe estimator for target states of the GHZ form.
/// Fidelity is estimated up to the parity phase offset as (P + C) / 2.
inline ParityPopulationEstimate estimate_parity_population(const PstDataset& data) {
  if (data.population_shots == 0)
    throw std::invalid_argument("estimate_parity_population: no computational-basis shots");
  if (data.phases.size() < static_cast<std::size_t>(2 * data.n_qubits + 1))
    throw std::invalid_argument("estimate_parity_population: insufficient phase coverage");

  ParityPopulationEstimate est;
  const double n_pop = static_cast<double>(data.population_shots);
  est.population = static_cast<double>(data.population_all_same) / n_pop;
  est.population_se = std::sqrt(std::max(est.population * (1.0 - est.population), 0.0) / n_pop);

  for (const auto& block : data.phases) {
    if (block.shots == 0)
      throw std::invalid_argument("estimate_parity_population: empty phase block");
    const double n = static_cast<double>(block.shots);
    const double mean = 2.0 * static_cast<double>(block.even_outcomes) / n - 1.0;
    // binomial SE of a +/-1 mean, floored to keep weights finite
    double se = std::sqrt(std::max(1.0 - mean * mean, 0.0) / n);
    se = std::max(se, 0.5 / n);
    est.phase_grid.push_back(block.phi);
    est.phase_values.push_back(mean);
    est.phase_errors.push_back(se);
  }

  est.fringe = fit::fit_parity_fringe(est.phase_grid, est.phase_values, est.phase_errors,
                                      data.n_qubits);
  est.contrast = est.fringe.contrast_debiased;
  est.parity_phase = est.fringe.phase;
  est.fidelity = 0.5 * (est.population + est.contrast);
  return est;
}

}  // namespace ionnet::tomo
