#include "ionnet/qcore/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

using ionnet::RngStream;

TEST_CASE("fixed seed gives identical sample sequence") {
  RngStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("split streams are independent of draw order") {
  RngStream root(7);
  RngStream c1 = root.split(3);
  // Drawing from the root must not perturb an already-derived child.
  root.next_u64();
  root.next_u64();
  RngStream c2 = RngStream(7).split(3);
  for (int i = 0; i < 100; ++i) REQUIRE(c1.next_u64() == c2.next_u64());
}

TEST_CASE("sibling and tagged streams differ") {
  RngStream root(7);
  std::set<std::uint64_t> keys;
  for (std::uint64_t lane = 0; lane < 64; ++lane) keys.insert(root.split(lane).key());
  keys.insert(root.split("herald").key());
  keys.insert(root.split("readout").key());
  REQUIRE(keys.size() == 66);
}

TEST_CASE("uniform moments") {
  RngStream rng(123);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
    s += u;
    s2 += u * u;
  }
  REQUIRE(std::abs(s / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
  REQUIRE(std::abs(s2 / n - 1.0 / 3.0) < 5e-3);
}

TEST_CASE("gaussian moments") {
  RngStream rng(9);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    s += g;
    s2 += g * g;
  }
  REQUIRE(std::abs(s / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  REQUIRE(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("geometric sample mean and variance match 1/p and (1-p)/p^2") {
  RngStream rng(2024);
  const double p = 1.5e-3;
  const int n = 20000;
  double mean = 0.0;
  std::vector<double> ks(n);
  for (int i = 0; i < n; ++i) {
    ks[i] = static_cast<double>(rng.geometric(p));
    mean += ks[i];
  }
  mean /= n;
  double var = 0.0;
  for (double k : ks) var += (k - mean) * (k - mean);
  var /= (n - 1);
  const double true_mean = 1.0 / p;
  const double true_var = (1.0 - p) / (p * p);
  REQUIRE(std::abs(mean - true_mean) < 4.0 * std::sqrt(true_var / n));
  REQUIRE(std::abs(var - true_var) < 4.0 * true_var * std::sqrt(2.0 / n));
}

TEST_CASE("geometric with p=1 always returns one attempt") {
  RngStream rng(5);
  for (int i = 0; i < 10; ++i) REQUIRE(rng.geometric(1.0) == 1);
}
