#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "rng.hpp"
#include "test_support.hpp"

using namespace genbayes;

TEST_CASE("mix64 scatters and is deterministic") {
  CHECK(mix64(0) == mix64(0));
  CHECK(mix64(1) != mix64(2));
  // A change in any single input bit should flip roughly half the output
  // bits (avalanche); 16 bits is a very loose floor.
  int worst = 64;
  for (int bit = 0; bit < 64; ++bit) {
    const std::uint64_t flipped = mix64(0x12345678u) ^ mix64(0x12345678u ^ (1ull << bit));
    worst = std::min(worst, __builtin_popcountll(flipped));
  }
  CHECK(worst >= 16);
}

TEST_CASE("derive_seed separates streams and is order sensitive") {
  const std::uint64_t master = 42;
  CHECK(derive_seed(master, {1, 2, 3}) == derive_seed(master, {1, 2, 3}));
  CHECK(derive_seed(master, {1, 2, 3}) != derive_seed(master, {3, 2, 1}));
  CHECK(derive_seed(master, {1}) != derive_seed(master, {1, 0}));
  CHECK(derive_seed(1, {7}) != derive_seed(2, {7}));

  // No collisions across a realistic grid of stream coordinates.
  std::set<std::uint64_t> seen;
  for (std::uint64_t dof : {5u, 10u, 20u}) {
    for (std::uint64_t n = 10; n <= 10240; n *= 2) {
      for (std::uint64_t rep = 0; rep < 100; ++rep) {
        seen.insert(derive_seed(master, {static_cast<std::uint64_t>(Stream::Dataset),
                                         dof, n, rep, 0}));
        seen.insert(derive_seed(master, {static_cast<std::uint64_t>(Stream::Chain),
                                         dof, n, rep}));
      }
    }
  }
  CHECK(seen.size() == 3 * 11 * 100 * 2);
}

TEST_CASE("Rng streams are reproducible and seed-sensitive") {
  Rng a(123), b(123), c(124);
  bool all_equal = true;
  bool any_equal_across = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_equal_across = any_equal_across || va == c.next_u64();
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_across);
}

TEST_CASE("uniform01 lives in [0,1) with the right first moments") {
  Rng rng(7);
  std::vector<double> draws(200000);
  for (double& d : draws) {
    d = rng.uniform01();
    REQUIRE(d >= 0.0);
    REQUIRE(d < 1.0);
  }
  CHECK(testsup::mean(draws) == doctest::Approx(0.5).epsilon(0.01));
  CHECK(testsup::variance(draws) == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("uniform_pos never returns zero") {
  Rng rng(11);
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform_pos();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normal has standard moments and symmetric tails") {
  Rng rng(99);
  const int n = 400000;
  std::vector<double> draws(n);
  int above2 = 0;
  for (double& d : draws) {
    d = rng.normal();
    if (std::abs(d) > 2.0) ++above2;
  }
  CHECK(std::abs(testsup::mean(draws)) < 0.01);
  CHECK(testsup::variance(draws) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(testsup::excess_kurtosis(draws)) < 0.1);
  // P(|Z| > 2) = 0.0455
  CHECK(static_cast<double>(above2) / n == doctest::Approx(0.0455).epsilon(0.1));
}

TEST_CASE("gamma matches mean and variance of Gamma(shape, 1)") {
  Rng rng(5);
  for (double shape : {1.0, 2.5, 10.0}) {
    std::vector<double> draws(200000);
    for (double& d : draws) {
      d = rng.gamma(shape);
      REQUIRE(d > 0.0);
    }
    CHECK(testsup::mean(draws) == doctest::Approx(shape).epsilon(0.02));
    CHECK(testsup::variance(draws) == doctest::Approx(shape).epsilon(0.05));
  }
}
