#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dtigra/signal.hpp"
#include "support/fixtures.hpp"

using namespace dtigra;
using dtigra::test::Rng;

TEST_CASE("midpoint grid") {
  CHECK(Signal::grid_point(0, 4) == 0.125);
  CHECK(Signal::grid_point(3, 4) == 0.875);
  const Signal s = Signal::sample(8, [](double t) { return t; });
  CHECK(s.grid_size() == 8);
  CHECK(s[0] == 1.0 / 16.0);
  CHECK_THROWS_AS(Signal(std::vector<double>{1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("l2_inner and l2_norm") {
  for (std::size_t n : {1u, 7u, 512u}) {
    const Signal one = Signal::sample(n, [](double) { return 1.0; });
    CHECK(l2_inner(one, one) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(l2_norm(one) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(l2_inner(Signal({1.0, -1.0}), Signal({1.0, 1.0})) == 0.0);
  CHECK(l2_norm(Signal(16)) == 0.0);

  // Midpoint rule for int t^2 = 1/3 has error 1/(12 n^2).
  const Signal t = Signal::sample(512, [](double x) { return x; });
  CHECK(std::fabs(l2_inner(t, t) - 1.0 / 3.0) <= 1e-5);

  const Signal s = Signal::sample(
      512, [](double x) { return std::sqrt(2.0) * std::sin(2.0 * std::numbers::pi * x); });
  CHECK(std::fabs(l2_norm(s) - 1.0) <= 1e-4);

  CHECK_THROWS_AS(l2_inner(Signal(3), Signal(4)), std::invalid_argument);
  CHECK_THROWS_AS(Signal(3) + Signal(4), std::invalid_argument);
}

TEST_CASE("l2_inner is symmetric and bilinear") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Signal u = rng.signal(64);
    const Signal v = rng.signal(64);
    const Signal w = rng.signal(64);
    const double a = rng.uniform(-3.0, 3.0);
    CHECK(l2_inner(u, v) == doctest::Approx(l2_inner(v, u)).epsilon(1e-12));
    const double lhs = l2_inner(a * u + w, v);
    const double rhs = a * l2_inner(u, v) + l2_inner(w, v);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + std::fabs(lhs)));
  }
}

TEST_CASE("add_noise hits the requested level exactly") {
  Rng rng(9);
  const Signal y = rng.signal(256);
  for (double level : {0.5, 0.05, 0.01, 0.005, 1e-9}) {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
      const NoisyData nd = add_noise(y, {level, seed});
      CHECK(nd.delta == doctest::Approx(level * l2_norm(y)).epsilon(1e-15));
      CHECK(std::fabs(l2_norm(nd.data - y) / l2_norm(y) - level) <= 1e-12 * std::max(1.0, level));
    }
  }
  const NoisyData tiny = add_noise(y, {1e-14, 3});
  CHECK(l2_norm(tiny.data - y) <= 1e-13 * l2_norm(y));
}

TEST_CASE("add_noise is deterministic in the seed") {
  const Signal y = Signal::sample(512, [](double t) { return t * t - 0.3; });
  const NoisyData a = add_noise(y, {0.01, 42});
  const NoisyData b = add_noise(y, {0.01, 42});
  CHECK(a.data == b.data);
  CHECK(a.delta == b.delta);
  const NoisyData c = add_noise(y, {0.01, 43});
  CHECK_FALSE(a.data == c.data);
}

TEST_CASE("add_noise errors") {
  CHECK_THROWS_AS(add_noise(Signal(8), {0.01, 1}), std::invalid_argument);
  const Signal y({1.0, 2.0});
  CHECK_THROWS_AS(add_noise(y, {0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(add_noise(y, {-0.1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(add_noise(y, {1.0, 1}), std::invalid_argument);
}
