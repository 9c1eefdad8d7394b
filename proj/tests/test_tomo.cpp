#include "ionnet/tomo/fidelity.hpp"
#include "ionnet/tomo/mle.hpp"
#include "ionnet/tomo/pst.hpp"
#include "ionnet/tomo/settings.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "testutil.hpp"

using namespace ionnet;
using namespace ionnet::tomo;
using testutil::max_abs_diff;

namespace {

/// Samples measurement records for a known state: outcome probabilities are
/// exactly tr(M_ij rho) with the readout-dressed POVMs.
TomographyDataset sample_dataset(const DensityMatrix& rho, int n_qubits,
                                 const std::vector<device::ReadoutErrorModel>& true_readout,
                                 const std::vector<device::ReadoutErrorModel>& analysis_readout,
                                 int shots, RngStream& rng) {
  TomographyDataset data;
  data.n_qubits = n_qubits;
  data.readout = analysis_readout;
  RngStream plan_rng = rng.split("plan");
  RngStream outcome_rng = rng.split("outcome");
  const auto plan = generate_settings(n_qubits, shots, plan_rng);
  std::map<std::uint32_t, std::vector<Mat>> povm_cache;
  for (const auto& setting : plan) {
    auto it = povm_cache.find(setting.encode());
    if (it == povm_cache.end())
      it = povm_cache.emplace(setting.encode(), build_povm(setting, true_readout)).first;
    const auto& povm = it->second;
    const double u = outcome_rng.uniform();
    double acc = 0.0;
    int outcome = static_cast<int>(povm.size() - 1);
    for (std::size_t j = 0; j < povm.size(); ++j) {
      acc += std::real((povm[j] * rho).trace());
      if (u <= acc) {
        outcome = static_cast<int>(j);
        break;
      }
    }
    data.add(setting, outcome);
  }
  return data;
}

std::vector<device::ReadoutErrorModel> uniform_readout(int n, double eps0, double eps1) {
  return std::vector<device::ReadoutErrorModel>(n, device::ReadoutErrorModel{eps0, eps1});
}

}  // namespace

TEST_CASE("settings are uniform with the identity doubled") {
  RngStream rng(1);
  const auto plan = generate_settings(1, 60000, rng);
  int identity_count = 0;
  for (const auto& s : plan)
    if (s.rotations[0] <= 1) ++identity_count;
  const double p = static_cast<double>(identity_count) / plan.size();
  REQUIRE(std::abs(p - 1.0 / 3.0) < 4.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / plan.size()));
}

TEST_CASE("two qubits admit 36 composite settings") {
  RngStream rng(2);
  const auto plan = generate_settings(2, 20000, rng);
  std::set<std::uint32_t> seen;
  for (const auto& s : plan) seen.insert(s.encode());
  REQUIRE(seen.size() == 36);
}

TEST_CASE("settings plans are reproducible per seed") {
  RngStream a(3), b(3);
  const auto pa = generate_settings(3, 100, a);
  const auto pb = generate_settings(3, 100, b);
  for (std::size_t i = 0; i < pa.size(); ++i) REQUIRE(pa[i].rotations == pb[i].rotations);
}

TEST_CASE("povm with perfect readout and identity rotation is projective") {
  const MeasurementSetting s{{0}};
  const auto povm = build_povm(s, uniform_readout(1, 0, 0));
  REQUIRE(max_abs_diff(povm[0], projector(basis_state(1, 0))) < 1e-15);
  REQUIRE(max_abs_diff(povm[1], projector(basis_state(1, 1))) < 1e-15);
}

TEST_CASE("povm matches the dressed-projector construction") {
  const double e0 = 0.001, e1 = 0.0;
  const auto [m_down, m_up] = single_qubit_povm(2, device::ReadoutErrorModel{e0, e1});
  const Mat& u = tomographic_rotation(2);
  const Mat expect_down = 0.999 * u.adjoint() * projector(basis_state(1, 0)) * u +
                          e1 * u.adjoint() * projector(basis_state(1, 1)) * u;
  REQUIRE(max_abs_diff(m_down, expect_down) < 1e-15);
  REQUIRE(max_abs_diff(m_down + m_up, identity(2)) < 1e-15);
}

TEST_CASE("povm completeness for random readout errors on every setting") {
  RngStream rng(4);
  for (int rep = 0; rep < 36; ++rep) {
    const MeasurementSetting s{{rep / 6, rep % 6}};
    std::vector<device::ReadoutErrorModel> ro = {{rng.uniform() * 0.1, rng.uniform() * 0.1},
                                                 {rng.uniform() * 0.1, rng.uniform() * 0.1}};
    const auto povm = build_povm(s, ro);
    Mat sum = Mat::Zero(4, 4);
    for (const auto& m : povm) sum += m;
    REQUIRE(max_abs_diff(sum, identity(4)) < 1e-10);
  }
}

TEST_CASE("mle reconstructs the maximally mixed state") {
  RngStream rng(5);
  const DensityMatrix rho = 0.5 * identity(2);
  const auto ro = uniform_readout(1, 0, 0);
  const auto data = sample_dataset(rho, 1, ro, ro, 10000, rng);
  const auto res = mle_reconstruct(data);
  REQUIRE(res.converged);
  REQUIRE(std::abs(res.rho_hat(0, 1)) < 0.02);
  REQUIRE(std::abs(res.rho_hat(0, 0).real() - 0.5) < 0.02);
}

TEST_CASE("mle log-likelihood is non-decreasing and reconstruction is accurate") {
  RngStream rng(6);
  const DensityMatrix rho = projector(bell_phi_plus());
  // calibrated network readout on both qubits
  const std::vector<device::ReadoutErrorModel> ro = {{5.34e-4, 5.34e-4}, {5.43e-4, 5.43e-4}};
  const auto data = sample_dataset(rho, 2, ro, ro, 10000, rng);
  const auto res = mle_reconstruct(data);
  for (std::size_t i = 1; i < res.log_likelihood.size(); ++i)
    REQUIRE(res.log_likelihood[i] >= res.log_likelihood[i - 1]);
  REQUIRE(is_density_matrix(res.rho_hat, 1e-9, 1e-9, -1e-9));
  REQUIRE(fidelity_to_pure(res.rho_hat, bell_phi_plus()) >= 0.99);
}

TEST_CASE("readout-aware mle removes readout bias") {
  RngStream rng(7);
  const DensityMatrix rho = projector(bell_phi_plus());
  const auto true_ro = uniform_readout(2, 0.02, 0.02);
  const auto blind_ro = uniform_readout(2, 0.0, 0.0);
  const auto data_aware = sample_dataset(rho, 2, true_ro, true_ro, 4000, rng);
  TomographyDataset data_blind = data_aware;
  data_blind.readout = blind_ro;
  const double f_aware = fidelity_to_pure(mle_reconstruct(data_aware).rho_hat, bell_phi_plus());
  const double f_blind = fidelity_to_pure(mle_reconstruct(data_blind).rho_hat, bell_phi_plus());
  const double bias_aware = std::abs(1.0 - f_aware);
  const double bias_blind = std::abs(1.0 - f_blind);
  REQUIRE(bias_blind >= 5.0 * bias_aware);
}

TEST_CASE("mle rejects informationally incomplete datasets") {
  TomographyDataset data;
  data.n_qubits = 1;
  data.readout = uniform_readout(1, 0, 0);
  // identity settings only: no phase information
  data.counts[MeasurementSetting{{0}}.encode()] = {70, 30};
  data.counts[MeasurementSetting{{1}}.encode()] = {72, 28};
  REQUIRE_THROWS_AS(mle_reconstruct(data), std::invalid_argument);
}

TEST_CASE("probability clamping is counted, not fatal") {
  RngStream rng(8);
  const DensityMatrix rho = 0.5 * identity(2);
  const auto ro = uniform_readout(1, 0, 0);
  const auto data = sample_dataset(rho, 1, ro, ro, 500, rng);
  MleOptions opts;
  opts.probability_clamp = 0.4;  // absurd clamp exercises the regularization path
  const auto res = mle_reconstruct(data, opts);
  REQUIRE(res.clamped_probabilities > 0);
  REQUIRE(res.rho_hat.allFinite());
}

TEST_CASE("pst on an ideal GHZ-3 dataset") {
  PstDataset data;
  data.n_qubits = 3;
  data.population_shots = 10000;
  data.population_all_same = 10000;
  const int shots = 100000;  // large counts so rounding stays below the margin
  for (double phi : fit::default_phase_grid(3)) {
    const double expect = std::cos(3.0 * phi);
    PstDataset::PhaseBlock b;
    b.phi = phi;
    b.shots = shots;
    b.even_outcomes = static_cast<std::uint64_t>(std::llround(shots * (1.0 + expect) / 2.0));
    data.phases.push_back(b);
  }
  const auto est = estimate_parity_population(data);
  REQUIRE(est.population == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(est.contrast == Catch::Approx(1.0).margin(1e-3));
  REQUIRE(est.fidelity == Catch::Approx(1.0).margin(1e-3));
  REQUIRE(est.fringe.frequency == 3);
}

TEST_CASE("pst parity of the maximally mixed state has no contrast") {
  RngStream rng(9);
  PstDataset data;
  data.n_qubits = 2;
  data.population_shots = 4000;
  data.population_all_same = 2000;  // I/4 populations
  const int shots = 3000;
  for (double phi : fit::default_phase_grid(2)) {
    PstDataset::PhaseBlock b;
    b.phi = phi;
    b.shots = shots;
    std::uint64_t even = 0;
    for (int s = 0; s < shots; ++s) even += rng.bernoulli(0.5) ? 1 : 0;
    b.even_outcomes = even;
    data.phases.push_back(b);
  }
  const auto est = estimate_parity_population(data);
  REQUIRE(est.contrast < 4.0 / std::sqrt(static_cast<double>(shots)));
}

TEST_CASE("pst requires phase coverage") {
  PstDataset data;
  data.n_qubits = 2;
  data.population_shots = 100;
  data.population_all_same = 100;
  for (int k = 0; k < 3; ++k) data.phases.push_back({0.1 * k, 100, 50});
  REQUIRE_THROWS_AS(estimate_parity_population(data), std::invalid_argument);
}

TEST_CASE("bipartite entanglement fidelity finds local corrections") {
  RngStream rng(10);
  const Mat flip = embed(pauli_x(), {0}, 2);
  const DensityMatrix rho = flip * projector(bell_phi_plus()) * flip.adjoint();
  const auto r = entanglement_fidelity_bipartite(rho, rng);
  REQUIRE(r.value == Catch::Approx(1.0).margin(1e-6));

  const auto mixed = entanglement_fidelity_bipartite(0.25 * identity(4), rng);
  REQUIRE(mixed.value == Catch::Approx(0.25).margin(1e-6));
}

TEST_CASE("bipartite optimizer matches the Bell-diagonal closed form") {
  RngStream rng(11);
  std::vector<PureState> bell;
  bell.push_back(bell_phi_plus());
  Vec phim(4), psip(4), psim(4);
  phim << 1, 0, 0, -1;
  psip << 0, 1, 1, 0;
  psim << 0, 1, -1, 0;
  bell.push_back(phim / std::sqrt(2.0));
  bell.push_back(psip / std::sqrt(2.0));
  bell.push_back(psim / std::sqrt(2.0));
  for (int rep = 0; rep < 3; ++rep) {
    double w[4], norm = 0;
    for (double& x : w) {
      x = rng.uniform();
      norm += x;
    }
    DensityMatrix rho = Mat::Zero(4, 4);
    double w_max = 0;
    for (int k = 0; k < 4; ++k) {
      rho += (w[k] / norm) * projector(bell[k]);
      w_max = std::max(w_max, w[k] / norm);
    }
    const auto r = entanglement_fidelity_bipartite(rho, rng);
    REQUIRE(r.value == Catch::Approx(w_max).margin(1e-5));
  }
}

TEST_CASE("ghz closed form is exact under local Z rotations") {
  RngStream rng(12);
  // phase-rotated ideal GHZ-4 keeps unit fidelity
  for (double phi : {0.0, 0.31, 1.7, 3.0}) {
    const DensityMatrix rho = projector(make_target_state(4, phi));
    REQUIRE(entanglement_fidelity_ghz(rho) == Catch::Approx(1.0).margin(1e-12));
  }
  // brute-force grid over local Z phases on a noisy GHZ state never exceeds
  // the closed form
  RngStream noise(13);
  DensityMatrix rho = 0.9 * projector(make_target_state(3, 0.7)) +
                      0.1 * testutil::random_density(8, noise);
  rho = 0.5 * (rho + rho.adjoint());
  const double closed = entanglement_fidelity_ghz(rho);
  double grid_best = 0.0;
  const int steps = 24;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b)
      for (int c = 0; c < steps; ++c) {
        const Mat u = tensor(tensor(rot_z(2 * M_PI * a / steps), rot_z(2 * M_PI * b / steps)),
                             rot_z(2 * M_PI * c / steps));
        grid_best = std::max(
            grid_best, fidelity_to_pure(u * rho * u.adjoint(), make_target_state(3, 0.0)));
      }
  REQUIRE(grid_best <= closed + 1e-9);
  REQUIRE(grid_best >= closed - 0.01);  // grid resolution
  // invariance on a random mixed state
  const DensityMatrix any = testutil::random_density(8, rng);
  const double base = entanglement_fidelity_ghz(any);
  for (int rep = 0; rep < 5; ++rep) {
    Mat u = Mat::Identity(1, 1);
    for (int q = 0; q < 3; ++q) u = tensor(u, rot_z(rng.uniform(-M_PI, M_PI)));
    REQUIRE(entanglement_fidelity_ghz(u * any * u.adjoint()) == Catch::Approx(base).margin(1e-12));
  }
}
