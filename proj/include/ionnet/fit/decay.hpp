#pragma once

#include "ionnet/qcore/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ionnet::fit {

enum class DecayModel {
  FixedFloor,     // F(t) = 0.5 + A exp(-t/T); floor pinned at the fully-mixed value
  FreeAsymptote,  // F(t) = B + A exp(-t/T)
};

struct DecayFit {
  double time_constant = 0.0;  // same unit as the input times
  double amplitude = 0.0;
  double offset = 0.5;
  double t_ci_lo = 0.0, t_ci_hi = 0.0;
  bool identifiable = true;
  bool converged = true;
  double chi2 = 0.0;
  DecayModel model = DecayModel::FixedFloor;
};

namespace detail {

struct DecayCore {
  double amplitude, time_constant, offset, chi2;
  bool converged;
};

/// Gauss-Newton with Levenberg damping on (A, T[, B]).
inline DecayCore fit_decay_core(const std::vector<double>& t, const std::vector<double>& y,
                                const std::vector<double>& w, DecayModel model) {
  const std::size_t m = t.size();
  const double t_max = *std::max_element(t.begin(), t.end());
  double offset = 0.5;
  // Log-linear initialization on points above the floor.
  double a0 = 0.0, tc0 = t_max;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n_ok = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = y[i] - offset;
      if (d > 1e-4) {
        const double ly = std::log(d);
        sx += t[i];
        sy += ly;
        sxx += t[i] * t[i];
        sxy += t[i] * ly;
        ++n_ok;
      }
    }
    if (n_ok >= 2) {
      const double det = n_ok * sxx - sx * sx;
      if (std::abs(det) > 1e-30) {
        const double slope = (n_ok * sxy - sx * sy) / det;
        const double icpt = (sy * sxx - sx * sxy) / det;
        if (slope < -1e-300) tc0 = std::min(-1.0 / slope, 100.0 * t_max);
        a0 = std::exp(icpt);
      }
    }
    if (a0 <= 0.0) a0 = std::max(1e-3, *std::max_element(y.begin(), y.end()) - offset);
  }

  double A = a0, T = tc0, B = offset;
  const bool free_b = model == DecayModel::FreeAsymptote;
  double lambda = 1e-3;
  auto chi2_of = [&](double a, double tc, double b) {
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - (b + a * std::exp(-t[i] / tc));
      c += w[i] * r * r;
    }
    return c;
  };
  double chi2 = chi2_of(A, T, B);
  bool converged = false;
  for (int iter = 0; iter < 300; ++iter) {
    // Normal equations J^T W J + lambda diag.
    double h[3][3] = {{0}}, g[3] = {0};
    for (std::size_t i = 0; i < m; ++i) {
      const double e = std::exp(-t[i] / T);
      const double r = y[i] - (B + A * e);
      const double j[3] = {e, A * e * t[i] / (T * T), 1.0};
      const int np = free_b ? 3 : 2;
      for (int p = 0; p < np; ++p) {
        g[p] += w[i] * j[p] * r;
        for (int q = 0; q < np; ++q) h[p][q] += w[i] * j[p] * j[q];
      }
    }
    const int np = free_b ? 3 : 2;
    double step[3] = {0, 0, 0};
    // Solve (H + lambda diag(H)) step = g by Gaussian elimination.
    double a_[3][4];
    for (int p = 0; p < np; ++p) {
      for (int q = 0; q < np; ++q) a_[p][q] = h[p][q] + (p == q ? lambda * h[p][p] : 0.0);
      a_[p][np] = g[p];
    }
    bool singular = false;
    for (int col = 0; col < np && !singular; ++col) {
      int piv = col;
      for (int r2 = col + 1; r2 < np; ++r2)
        if (std::abs(a_[r2][col]) > std::abs(a_[piv][col])) piv = r2;
      if (std::abs(a_[piv][col]) < 1e-300) { singular = true; break; }
      std::swap(a_[piv], a_[col]);
      for (int r2 = 0; r2 < np; ++r2) {
        if (r2 == col) continue;
        const double f = a_[r2][col] / a_[col][col];
        for (int c2 = col; c2 <= np; ++c2) a_[r2][c2] -= f * a_[col][c2];
      }
    }
    if (singular) break;
    for (int p = 0; p < np; ++p) step[p] = a_[p][np] / a_[p][p];

    double A2 = A + step[0];
    double T2 = T + step[1];
    double B2 = free_b ? B + step[2] : B;
    if (T2 <= 0.0) T2 = T / 2.0;
    const double chi2_new = chi2_of(A2, T2, B2);
    if (chi2_new <= chi2) {
      const bool small = std::abs(chi2 - chi2_new) < 1e-12 * (1.0 + chi2);
      A = A2;
      T = T2;
      B = B2;
      chi2 = chi2_new;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (small) { converged = true; break; }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  return DecayCore{A, T, B, chi2, converged};
}

}  // namespace detail

/// Weighted exponential-decay fit with bootstrap CI on the time constant.
/// The CI resamples each point from a normal with its stated error.
inline DecayFit fit_exp_decay(const std::vector<double>& times, const std::vector<double>& values,
                              const std::vector<double>& errors, DecayModel model, RngStream& rng,
                              int n_boot = 200) {
  const std::size_t m = times.size();
  if (m < 3 || values.size() != m || errors.size() != m)
    throw std::invalid_argument("fit_exp_decay: need >= 3 points with matching errors");
  std::vector<double> w(m);
  double err_bar = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (errors[i] <= 0.0) throw std::invalid_argument("fit_exp_decay: errors must be positive");
    w[i] = 1.0 / (errors[i] * errors[i]);
    err_bar += errors[i];
  }
  err_bar /= m;

  const auto core = detail::fit_decay_core(times, values, w, model);
  DecayFit fit;
  fit.model = model;
  fit.amplitude = core.amplitude;
  fit.time_constant = core.time_constant;
  fit.offset = core.offset;
  fit.chi2 = core.chi2;
  fit.converged = core.converged;

  const double t_max = *std::max_element(times.begin(), times.end());
  if (fit.amplitude < 3.0 * err_bar || fit.time_constant > 50.0 * t_max) {
    fit.identifiable = false;
    fit.t_ci_lo = 0.0;
    fit.t_ci_hi = std::numeric_limits<double>::infinity();
    return fit;
  }

  std::vector<double> ts;
  ts.reserve(n_boot);
  std::vector<double> y2(m);
  for (int r = 0; r < n_boot; ++r) {
    RngStream lane = rng.split(static_cast<std::uint64_t>(r));
    for (std::size_t i = 0; i < m; ++i) y2[i] = values[i] + errors[i] * lane.gaussian();
    const auto c = detail::fit_decay_core(times, y2, w, model);
    if (c.converged && c.time_constant < 50.0 * t_max) ts.push_back(c.time_constant);
  }
  if (ts.size() < 50) {
    fit.identifiable = false;
    fit.t_ci_lo = 0.0;
    fit.t_ci_hi = std::numeric_limits<double>::infinity();
    return fit;
  }
  std::sort(ts.begin(), ts.end());
  fit.t_ci_lo = ts[static_cast<std::size_t>(0.025 * (ts.size() - 1))];
  fit.t_ci_hi = ts[static_cast<std::size_t>(std::ceil(0.975 * (ts.size() - 1)))];
  return fit;
}

}  // namespace ionnet::fit
