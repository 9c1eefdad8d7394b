#include "ionnet/qcore/channels.hpp"
#include "ionnet/qcore/haar.hpp"
#include "ionnet/qcore/ops.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace ionnet;
using testutil::max_abs_diff;

TEST_CASE("identity channel leaves input unchanged") {
  QuantumChannel id{{identity(2)}, true};
  RngStream rng(1);
  const Mat rho = testutil::random_density(2, rng);
  REQUIRE(max_abs_diff(apply_channel(rho, id, {0}), rho) < 1e-14);
}

TEST_CASE("fully depolarizing channel maps |0><0| to I/2") {
  const QuantumChannel dep = depolarizing_channel(1, 1.0);
  const Mat out = apply_channel(projector(basis_state(1, 0)), dep, {0});
  REQUIRE(max_abs_diff(out, 0.5 * identity(2)) < 1e-14);
}

TEST_CASE("kraus_to_superop identity and unitary cases") {
  QuantumChannel id{{identity(2)}, true};
  REQUIRE(max_abs_diff(kraus_to_superop(id).matrix, identity(4)) < 1e-15);

  RngStream rng(2);
  const Mat u = haar_unitary(2, rng);
  const Superoperator s = kraus_to_superop(QuantumChannel{{u}, true});
  REQUIRE(max_abs_diff(s.matrix, tensor(u.conjugate(), u)) < 1e-14);
}

TEST_CASE("fully depolarizing superoperator has unit trace") {
  const Superoperator s = kraus_to_superop(depolarizing_channel(1, 1.0));
  REQUIRE(std::abs(s.matrix.trace().real() - 1.0) < 1e-12);
  // S = |I/2>> <<I|
  const Vec id_vec = vectorize(identity(2));
  const Mat expect = 0.5 * id_vec * id_vec.adjoint();
  REQUIRE(max_abs_diff(s.matrix, expect) < 1e-12);
}

TEST_CASE("kraus application equals superoperator application on random channels") {
  RngStream rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index dim = (rep % 2 == 0) ? 2 : 4;
    const int nk = 1 + static_cast<int>(rng.uniform_int(4));
    const QuantumChannel ch = testutil::random_channel(dim, nk, rng);
    REQUIRE(ch.completeness_defect() < 1e-10);
    const Superoperator s = kraus_to_superop(ch);
    REQUIRE(s.is_trace_preserving(1e-9));
    const Mat rho = testutil::random_density(dim, rng);
    const std::vector<int> targets = dim == 2 ? std::vector<int>{0} : std::vector<int>{0, 1};
    const Mat via_kraus = apply_channel(rho, ch, targets);
    const Mat via_superop = superop_apply(s, rho);
    REQUIRE(max_abs_diff(via_kraus, via_superop) < 1e-10);
    // channels preserve hermiticity and trace
    REQUIRE(is_hermitian(via_kraus, 1e-10));
    REQUIRE(std::abs(via_kraus.trace().real() - 1.0) < 1e-9);
  }
}

TEST_CASE("channel application on a larger register matches embedded superoperator") {
  RngStream rng(4);
  const QuantumChannel ch = testutil::random_channel(2, 3, rng);
  const Mat rho = testutil::random_density(8, rng);
  for (int target = 0; target < 3; ++target) {
    QuantumChannel embedded;
    for (const Mat& k : ch.kraus) embedded.kraus.push_back(embed(k, {target}, 3));
    const Mat a = apply_channel(rho, ch, {target});
    const Mat b = superop_apply(kraus_to_superop(embedded), rho);
    REQUIRE(max_abs_diff(a, b) < 1e-10);
  }
}

TEST_CASE("apply_channel rejects dimension mismatch") {
  const QuantumChannel dep = depolarizing_channel(1, 0.5);
  const Mat rho = identity(4) / 4.0;
  REQUIRE_THROWS_AS(apply_channel(rho, dep, {0, 1}), std::invalid_argument);
}

TEST_CASE("depolarizing strength reproduces target average fidelity analytically") {
  // F_avg(E(U=I), I) computed from the superoperator trace formula must
  // equal the requested value for both one- and two-qubit gates.
  for (int n : {1, 2}) {
    const double f_target = n == 1 ? 0.999 : 0.976;
    const double p = depol_p_for_avg_fidelity(f_target, n);
    const Superoperator s = kraus_to_superop(depolarizing_channel(n, p));
    const double d = static_cast<double>(1 << n);
    const double f = (d + s.matrix.trace().real()) / (d * (d + 1.0));
    REQUIRE(f == Catch::Approx(f_target).margin(1e-12));
  }
}

TEST_CASE("dephasing channel scales coherences by gamma") {
  const double gamma = 0.7;
  Mat rho(2, 2);
  rho << 0.6, cx(0.2, 0.1), cx(0.2, -0.1), 0.4;
  const Mat out = apply_channel(rho, dephasing_channel(gamma), {0});
  REQUIRE(std::abs(out(0, 0).real() - 0.6) < 1e-14);
  REQUIRE(std::abs(out(0, 1) - gamma * rho(0, 1)) < 1e-14);
}

TEST_CASE("amplitude damping moves population down and damps coherence") {
  const double g = 0.3;
  Mat rho(2, 2);
  rho << 0.5, cx(0.5, 0), cx(0.5, 0), 0.5;
  const Mat out = apply_channel(rho, amplitude_damping_channel(g), {0});
  REQUIRE(out(1, 1).real() == Catch::Approx(0.5 * (1 - g)).margin(1e-14));
  REQUIRE(out(0, 1).real() == Catch::Approx(0.5 * std::sqrt(1 - g)).margin(1e-14));
}

TEST_CASE("ravel2 converts factored vectorizations to the joint one") {
  RngStream rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat a = testutil::random_density(2, rng);
    const Mat b = testutil::random_density(2, rng);
    const Vec lhs = ravel2() * tensor(vectorize(a), vectorize(b));
    REQUIRE((lhs - vectorize(tensor(a, b))).norm() < 1e-14);
  }
}

TEST_CASE("iswap truth table") {
  // (a|0> + b|1>) (x) |0>  ->  |0> (x) (a|0> + i b|1>)
  const cx a(0.6, 0.0), b(0.0, 0.8);
  Vec in = Vec::Zero(4);
  in(0) = a;
  in(2) = b;
  const Vec out = iswap() * in;
  REQUIRE(std::abs(out(0) - a) < 1e-15);
  REQUIRE(std::abs(out(1) - cx(0, 1) * b) < 1e-15);
  REQUIRE(std::abs(out(2)) < 1e-15);
  REQUIRE(std::abs(out(3)) < 1e-15);
}
