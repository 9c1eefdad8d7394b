#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace ionnet {

/// Splittable counter-based random stream.
///
/// Every stream is identified by a 64-bit key; draws hash (key, counter)
/// so a stream's output depends only on its key and position, never on
/// other streams. Child streams derive their key from the parent key and
/// a tag, which makes per-shot / per-resample streams reproducible under
/// any execution order or thread count.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ kKeyTweak)) {}

  /// Child stream for an integer lane (shot index, resample index, ...).
  RngStream split(std::uint64_t lane) const {
    return RngStream(key_, mix(key_ ^ mix(lane ^ kLaneTweak)));
  }

  /// Child stream for a named purpose ("herald", "readout", ...).
  RngStream split(std::string_view tag) const { return split(fnv1a(tag)); }

  std::uint64_t next_u64() { return mix(key_ + kGolden * ++counter_); }

  /// Uniform double in (0, 1].
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * (1.0 - uniform()); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    // Multiply-shift; bias is negligible for n << 2^64.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() <= p; }

  /// Standard normal via Box-Muller (pair cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Number of Bernoulli(p) trials up to and including the first success.
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    const double u = uniform();
    const double k = std::ceil(std::log(u) / std::log1p(-p));
    return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
  }

  std::uint64_t key() const { return key_; }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

private:
  RngStream(std::uint64_t, std::uint64_t derived_key) : key_(derived_key) {}

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kKeyTweak = 0x5851f42d4c957f2dULL;
  static constexpr std::uint64_t kLaneTweak = 0x14057b7ef767814fULL;

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ionnet
