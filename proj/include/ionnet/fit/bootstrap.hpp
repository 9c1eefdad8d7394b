#pragma once

#include "ionnet/qcore/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ionnet::fit {

struct BootstrapResult {
  double estimate = 0.0;  // statistic on the original sample
  double mean = 0.0;      // mean over resamples
  double ci_lo = 0.0;     // 2.5th percentile
  double ci_hi = 0.0;     // 97.5th percentile
};

/// Shot-level percentile bootstrap. `statistic` receives a vector of item
/// indices (with repetition) and returns the statistic of that resample.
template <typename Statistic>
BootstrapResult bootstrap(std::size_t n_items, Statistic&& statistic, int n_resamples,
                          RngStream& rng) {
  if (n_items == 0) throw std::invalid_argument("bootstrap: empty records");
  if (n_resamples < 100) throw std::invalid_argument("bootstrap: need at least 100 resamples");

  std::vector<std::size_t> idx(n_items);
  for (std::size_t i = 0; i < n_items; ++i) idx[i] = i;
  BootstrapResult out;
  out.estimate = statistic(idx);

  std::vector<double> stats(n_resamples);
  for (int r = 0; r < n_resamples; ++r) {
    RngStream lane = rng.split(static_cast<std::uint64_t>(r));
    for (std::size_t i = 0; i < n_items; ++i) idx[i] = lane.uniform_int(n_items);
    stats[r] = statistic(idx);
    out.mean += stats[r];
  }
  out.mean /= n_resamples;
  std::sort(stats.begin(), stats.end());
  auto percentile = [&](double q) {
    const double pos = q * (n_resamples - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min<std::size_t>(lo + 1, n_resamples - 1);
    const double frac = pos - lo;
    return stats[lo] * (1.0 - frac) + stats[hi] * frac;
  };
  out.ci_lo = percentile(0.025);
  out.ci_hi = percentile(0.975);
  return out;
}

}  // namespace ionnet::fit
