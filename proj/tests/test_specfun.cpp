#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pointspec/specfun.hpp"

using namespace pointspec;
namespace oracle = testing_oracles;

namespace {
double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}
}  // namespace

TEST_CASE("bessel K at frozen reference points") {
  // Quadrature of K0(x) = int_0^inf e^{-x cosh t} dt at x = 1.
  CHECK(rel_err(bessel_k(0, 1.0), 0.42102443824070834) < 1e-13);
  CHECK(rel_err(bessel_k(0, 1.0), oracle::bessel_k_integral(0, 1.0)) < 1e-12);

  // Small-argument limit z K1(z) -> 1.
  for (double z : {1e-6, 1e-8}) CHECK(rel_err(z * bessel_k(1, z), 1.0) < 1e-9);

  // Wronskian identity at z = 2: I0 K1 + I1 K0 = 1/2.
  const double w =
      bessel_i(0, 2.0) * bessel_k(1, 2.0) + bessel_i(1, 2.0) * bessel_k(0, 2.0);
  CHECK(rel_err(w, 0.5) < 1e-13);
}

TEST_CASE("bessel I at frozen reference points") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK(bessel_i(5, 0.0) == 0.0);
  CHECK(rel_err(bessel_i(0, 1.0), 1.2660658777520084) < 1e-13);
  CHECK(rel_err(bessel_i(0, 1.0), oracle::bessel_i_series(0, 1.0)) < 1e-13);
}

TEST_CASE("agreement with independent oracles at random points") {
  oracle::SplitMix64 rng(20240811u);
  for (int trial = 0; trial < 100; ++trial) {
    const int l = rng.uniform_int(0, 10);
    const double z = std::exp(rng.uniform(std::log(1e-3), std::log(50.0)));
    const double i_ref = oracle::bessel_i_series(l, z);
    const double k_ref = oracle::bessel_k_integral(l, z);
    INFO("l=" << l << " z=" << z);
    CHECK(rel_err(bessel_i(l, z), i_ref) < 1e-10);
    CHECK(rel_err(bessel_k(l, z), k_ref) < 1e-10);
  }
}

TEST_CASE("wronskian and recurrence invariants on a grid") {
  for (int l = 0; l <= 10; ++l) {
    for (double z = 1e-3; z <= 50.0; z *= 2.3) {
      const double i0 = bessel_i_scaled(l, z);
      const double i1 = bessel_i_scaled(l + 1, z);
      const double k0 = bessel_k_scaled(l, z);
      const double k1 = bessel_k_scaled(l + 1, z);
      // Scaled products equal unscaled products.
      const double wron = i0 * k1 + i1 * k0;
      CHECK(std::abs(wron - 1.0 / z) <= 1e-11 / z);
      if (l >= 1) {
        const double km = bessel_k_scaled(l - 1, z);
        CHECK(rel_err(k1, km + (2.0 * l / z) * k0) < 1e-10);
      }
    }
  }
}

TEST_CASE("monotonicity in z") {
  for (int l : {0, 1, 3, 7}) {
    double prev_k = bessel_k(l, 0.05);
    double prev_i = bessel_i(l, 0.05);
    double prev_ik = ik_product(l, 0.05);
    for (double z = 0.1; z < 40.0; z *= 1.7) {
      const double k = bessel_k(l, z);
      const double i = bessel_i(l, z);
      const double ik = ik_product(l, z);
      CHECK(k < prev_k);
      CHECK(i > prev_i);
      CHECK(ik < prev_ik);
      prev_k = k;
      prev_i = i;
      prev_ik = ik;
    }
  }
}

TEST_CASE("ik_product limits and degenerate regimes") {
  // sup at z -> 0+ is 1/(2l) for l >= 1.
  CHECK(rel_err(ik_product(1, 1e-6), 0.5) < 1e-9);
  CHECK(rel_err(ik_product(4, 1e-8), 0.125) < 1e-12);
  // Product of independently computed factors.
  CHECK(rel_err(ik_product(0, 1.0),
                oracle::bessel_i_series(0, 1.0) * oracle::bessel_k_integral(0, 1.0)) <
        1e-11);
  CHECK(ik_product(2, 1.0) > ik_product(2, 2.0));
  // Deep small-z regime where the scaled factors leave the double range.
  CHECK(rel_err(ik_product(64, 1e-12), 1.0 / 128.0) < 1e-12);
  CHECK(rel_err(ik_product(64, 1e-3), 1.0 / 128.0) < 1e-6);
  // Large z: I K ~ 1/(2z).
  CHECK(rel_err(ik_product(0, 500.0), 1.0 / 1000.0) < 1e-3);
}

TEST_CASE("domain and range errors") {
  CHECK_THROWS_AS(bessel_k(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0, -1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(0, -1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(65, 1.0), std::domain_error);
  CHECK_THROWS_AS(BesselOrder(65), std::domain_error);
  CHECK_NOTHROW(BesselOrder(64));

  // Unscaled overflow/underflow regions must report range errors while the
  // scaled variants stay finite.
  CHECK_THROWS_AS(bessel_i(0, 800.0), std::range_error);
  CHECK_THROWS_AS(bessel_k(0, 800.0), std::range_error);
  CHECK(std::isfinite(bessel_i_scaled(0, 800.0)));
  CHECK(std::isfinite(bessel_k_scaled(0, 800.0)));
  // Scaled K overflows for extreme order at tiny argument.
  CHECK_THROWS_AS(bessel_k_scaled(64, 1e-4), std::range_error);
}

TEST_CASE("scaled and unscaled variants agree where both exist") {
  for (double z : {0.01, 0.5, 2.0, 5.0, 30.0, 200.0}) {
    for (int l : {0, 1, 2, 10}) {
      CHECK(rel_err(bessel_i(l, z), bessel_i_scaled(l, z) * std::exp(z)) < 1e-14);
      CHECK(rel_err(bessel_k(l, z), bessel_k_scaled(l, z) * std::exp(-z)) < 1e-14);
    }
  }
}
