#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace ionnet::fit {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Downhill simplex minimization; small dimensions only.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double step, int max_evals = 4000,
                                    double ftol = 1e-12) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  int evals = 0;
  for (std::size_t i = 1; i <= n; ++i) pts[i][i - 1] += step;
  for (std::size_t i = 0; i <= n; ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }
  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = vals[idx[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };
  order();
  bool converged = false;
  while (evals < max_evals) {
    if (vals[n] - vals[0] < ftol * (1.0 + std::abs(vals[0]))) {
      converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;
    auto blend = [&](double alpha) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + alpha * (pts[n][j] - centroid[j]);
      return p;
    };
    const auto refl = blend(-1.0);
    const double f_refl = f(refl);
    ++evals;
    if (f_refl < vals[0]) {
      const auto exp_ = blend(-2.0);
      const double f_exp = f(exp_);
      ++evals;
      pts[n] = f_exp < f_refl ? exp_ : refl;
      vals[n] = std::min(f_exp, f_refl);
    } else if (f_refl < vals[n - 1]) {
      pts[n] = refl;
      vals[n] = f_refl;
    } else {
      const auto contr = blend(f_refl < vals[n] ? -0.5 : 0.5);
      const double f_contr = f(contr);
      ++evals;
      if (f_contr < std::min(f_refl, vals[n])) {
        pts[n] = contr;
        vals[n] = f_contr;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
          vals[i] = f(pts[i]);
          ++evals;
        }
      }
    }
    order();
  }
  return NelderMeadResult{pts[0], vals[0], evals, converged};
}

}  // namespace ionnet::fit
