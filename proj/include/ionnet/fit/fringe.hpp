#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace ionnet::fit {

/// Weighted least-squares fit of C cos(N phi - phi0) with the fringe
/// frequency locked to N. The fit is linear in a = C cos(phi0),
/// b = C sin(phi0); on noiseless data it is exact.
struct FringeFit {
  int frequency = 0;
  double a = 0.0, b = 0.0;
  double contrast = 0.0;           // sqrt(a^2 + b^2)
  double contrast_debiased = 0.0;  // first-order bias-corrected, floored at 0
  double phase = 0.0;              // phi0 = atan2(b, a)
  double var_a = 0.0, var_b = 0.0, cov_ab = 0.0;
  double contrast_se = 0.0;
  bool clamped = false;  // contrast exceeded 1 and was clamped
  std::vector<double> residuals;
};

inline FringeFit fit_parity_fringe(const std::vector<double>& phases,
                                   const std::vector<double>& values,
                                   const std::vector<double>& errors, int n_lock) {
  const std::size_t m = phases.size();
  if (values.size() != m || errors.size() != m)
    throw std::invalid_argument("fit_parity_fringe: input length mismatch");
  if (n_lock < 1) throw std::invalid_argument("fit_parity_fringe: frequency must be >= 1");

  std::set<double> distinct(phases.begin(), phases.end());
  const double period = 2.0 * M_PI / n_lock;
  const double span = distinct.empty() ? 0.0 : (*distinct.rbegin() - *distinct.begin());
  if (distinct.size() < static_cast<std::size_t>(2 * n_lock + 1) || span < 0.75 * period)
    throw std::invalid_argument("fit_parity_fringe: insufficient phase coverage");

  double saa = 0, sbb = 0, sab = 0, say = 0, sby = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (errors[k] <= 0.0) throw std::invalid_argument("fit_parity_fringe: errors must be positive");
    const double w = 1.0 / (errors[k] * errors[k]);
    const double c = std::cos(n_lock * phases[k]);
    const double s = std::sin(n_lock * phases[k]);
    saa += w * c * c;
    sbb += w * s * s;
    sab += w * c * s;
    say += w * c * values[k];
    sby += w * s * values[k];
  }
  const double det = saa * sbb - sab * sab;
  if (std::abs(det) < 1e-300) throw std::invalid_argument("fit_parity_fringe: singular design");

  FringeFit fit;
  fit.frequency = n_lock;
  fit.a = (sbb * say - sab * sby) / det;
  fit.b = (saa * sby - sab * say) / det;
  fit.var_a = sbb / det;
  fit.var_b = saa / det;
  fit.cov_ab = -sab / det;
  fit.contrast = std::hypot(fit.a, fit.b);
  fit.phase = std::atan2(fit.b, fit.a);

  // sqrt(a^2+b^2) is positively biased at low signal-to-noise; subtract the
  // parameter variances in quadrature before taking the root.
  const double c2 = fit.a * fit.a + fit.b * fit.b - (fit.var_a + fit.var_b);
  fit.contrast_debiased = c2 > 0.0 ? std::sqrt(c2) : 0.0;
  if (fit.contrast_debiased > 1.0) {
    fit.contrast_debiased = 1.0;
    fit.clamped = true;
  }
  if (fit.contrast > 0.0)
    fit.contrast_se = std::sqrt(std::max(0.0, fit.a * fit.a * fit.var_a + fit.b * fit.b * fit.var_b +
                                                  2.0 * fit.a * fit.b * fit.cov_ab)) /
                      fit.contrast;

  fit.residuals.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    fit.residuals[k] =
        values[k] - (fit.a * std::cos(n_lock * phases[k]) + fit.b * std::sin(n_lock * phases[k]));
  return fit;
}

/// Default analysis-phase grid: 2N+2 points uniformly covering one fringe
/// period.
inline std::vector<double> default_phase_grid(int n_qubits) {
  const int k = 2 * n_qubits + 2;
  std::vector<double> phases(k);
  const double period = 2.0 * M_PI / n_qubits;
  for (int i = 0; i < k; ++i) phases[i] = period * i / k;
  return phases;
}

}  // namespace ionnet::fit
