#pragma once

#include "ionnet/fit/neldermead.hpp"
#include "ionnet/qcore/ops.hpp"
#include "ionnet/qcore/rng.hpp"

#include <vector>

namespace ionnet::tomo {

struct EntanglementFidelity {
  double value = 0.0;
  bool converged = true;  // best restart converged; value is still the best found
};

/// Fidelity to the closest maximally entangled two-qubit state under local
/// unitaries: max over U1 (x) U2 of <Phi+| U rho U^dag |Phi+>, three Euler
/// angles per side, multi-start simplex search.
inline EntanglementFidelity entanglement_fidelity_bipartite(const DensityMatrix& rho,
                                                            RngStream& rng, int restarts = 20) {
  if (rho.rows() != 4) throw std::invalid_argument("bipartite fidelity needs a 2-qubit state");
  const PureState& phi = bell_phi_plus();
  auto local = [](const std::vector<double>& x, int side) {
    return rot_z(x[3 * side]) * rot_y(x[3 * side + 1]) * rot_z(x[3 * side + 2]);
  };
  auto neg_f = [&](const std::vector<double>& x) {
    const Mat u = tensor(local(x, 0), local(x, 1));
    return -std::real(phi.dot(u * rho * u.adjoint() * phi));
  };
  EntanglementFidelity best;
  best.value = -1.0;
  bool best_converged = false;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x0(6);
    for (double& v : x0) v = (r == 0) ? 0.0 : rng.uniform(-M_PI, M_PI);
    const auto res = fit::nelder_mead(neg_f, x0, 0.6, 3000, 1e-12);
    if (-res.value > best.value) {
      best.value = -res.value;
      best_converged = res.converged;
    }
  }
  best.converged = best_converged;
  return best;
}

/// GHZ-form entanglement fidelity under local Z rotations, closed form:
/// (rho_00 + rho_LL)/2 + |rho_0L| with L = 2^N - 1. Exact because a local
/// Z rotation only shifts the phase of the corner coherence.
inline double entanglement_fidelity_ghz(const DensityMatrix& rho) {
  const Eigen::Index last = rho.rows() - 1;
  return 0.5 * (std::real(rho(0, 0)) + std::real(rho(last, last))) + std::abs(rho(0, last));
}

}  // namespace ionnet::tomo
