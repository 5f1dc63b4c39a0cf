#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dtigra/seqspace.hpp"
#include "dtigra/theory.hpp"
#include "support/fixtures.hpp"

using namespace dtigra;
using dtigra::test::Rng;

namespace {

double max_rel_entry_error(const CoefVec& got, const CoefVec& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const double diff = std::fabs(got[i] - want[i]);
    const double err = std::fabs(want[i]) > 1e-8 ? diff / std::fabs(want[i]) : diff;
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace

TEST_CASE("Exponent derives q and rejects p outside (1, 2]") {
  const Exponent e(1.5);
  CHECK(e.q() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(1.0 / e.p() + 1.0 / e.q() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Exponent(2.0).q() == 2.0);
  CHECK_THROWS_AS(Exponent(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponent(2.5), std::invalid_argument);
  CHECK_THROWS_AS(Exponent(std::nan("")), std::invalid_argument);
}

TEST_CASE("vectors reject non-finite entries and mismatched lengths") {
  CHECK_THROWS_AS(CoefVec({1.0, std::numeric_limits<double>::infinity()}), std::invalid_argument);
  CHECK_THROWS_AS(DualVec({std::nan("")}), std::invalid_argument);
  const CoefVec a{1.0, 2.0};
  const CoefVec b{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(bregman_fp(a, b, Exponent(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(pairing(DualVec{1.0}, b), std::invalid_argument);
}

TEST_CASE("lp_norm") {
  CHECK(lp_norm(CoefVec{0.0, 0.0, 0.0}, Exponent(1.5)) == 0.0);
  CHECK(lp_norm(CoefVec{3.0, -1.0, 0.5}, Exponent(2.0)) ==
        doctest::Approx(std::sqrt(10.25)).epsilon(1e-15));
  // (3^1.2 + 1 + 0.5^1.2)^(1/1.2), 50-digit reference
  CHECK(lp_norm(CoefVec{3.0, -1.0, 0.5}, Exponent(1.2)) ==
        doctest::Approx(3.933219504705170).epsilon(1e-14));
}

TEST_CASE("fp_value") {
  CHECK(fp_value(CoefVec(5), Exponent(1.3)) == 0.0);
  CHECK(fp_value(CoefVec{2.0}, Exponent(2.0)) == doctest::Approx(2.0));
  CHECK(fp_value(CoefVec{1.0, 1.0, 1.0, 1.0}, Exponent(1.25)) == doctest::Approx(3.2));
  CHECK(fp_value(CoefVec{1.0, -1.0, 1.0, -1.0}, Exponent(1.25)) == doctest::Approx(3.2));
}

TEST_CASE("duality maps") {
  SUBCASE("J_2 is the identity") {
    Rng rng(3);
    const CoefVec x = rng.coef(17);
    CHECK(duality_map_p(x, Exponent(2.0)).vec() == x.vec());
    const DualVec xi = rng.dual(17);
    CHECK(duality_map_q(xi, Exponent(2.0)).vec() == xi.vec());
  }
  SUBCASE("worked values") {
    const DualVec j = duality_map_p(CoefVec{-8.0, 0.0}, Exponent(1.5));
    CHECK(j[0] == doctest::Approx(-std::sqrt(8.0)).epsilon(1e-15));
    CHECK(j[1] == 0.0);
    CHECK(duality_map_p(CoefVec{0.5}, Exponent(1.2))[0] ==
          doctest::Approx(0.8705505632961241).epsilon(1e-14));
    const CoefVec back = duality_map_q(DualVec{-2.8284271247461903}, Exponent(1.5));
    CHECK(std::fabs(back[0] + 8.0) <= 1e-10);
  }
  SUBCASE("J_q inverts J_p on a short vector") {
    const Exponent e(1.6);
    const CoefVec x{3.0, -1.0, 0.5};
    CHECK(max_rel_entry_error(duality_map_q(duality_map_p(x, e), e), x) <= 1e-12);
  }
  SUBCASE("inversion over random vectors and scales") {
    Rng rng(11);
    for (double p : {1.05, 1.2, 1.5, 1.6, 1.9, 2.0}) {
      const Exponent e(p);
      for (int trial = 0; trial < 50; ++trial) {
        CoefVec x = rng.coef(64);
        const double scale = std::pow(10.0, rng.uniform(-10.0, 6.0));
        x = scale * x;
        CHECK(max_rel_entry_error(duality_map_q(duality_map_p(x, e), e), x) <= 1e-12);
      }
    }
  }
  SUBCASE("norm link ||J_p(x)||_q = ||x||_p^(p-1)") {
    Rng rng(12);
    for (double p : {1.1, 1.3, 1.6, 2.0}) {
      const Exponent e(p);
      for (int trial = 0; trial < 20; ++trial) {
        const CoefVec x = rng.coef(32);
        CHECK(lq_norm(duality_map_p(x, e), e) ==
              doctest::Approx(std::pow(lp_norm(x, e), p - 1.0)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("Bregman distances: worked values") {
  const Exponent e2(2.0);
  CHECK(bregman_fp(CoefVec{1.0, 0.0}, CoefVec{0.0, 0.0}, e2) == doctest::Approx(0.5));
  CHECK(bregman_fq_dual(DualVec{2.0}, DualVec{0.0}, e2) == doctest::Approx(2.0));
  const CoefVec x{0.3, -2.0, 1.1};
  CHECK(bregman_fp(x, x, Exponent(1.4)) == 0.0);
  const DualVec a{0.3, -2.0};
  CHECK(bregman_fq_dual(a, a, Exponent(1.4)) == 0.0);
}

TEST_CASE("Bregman distances: properties over random pairs") {
  Rng rng(21);
  for (double p : {1.2, 1.6, 2.0}) {
    const Exponent e(p);
    double worst_cross = 0.0;
    double min_dual_ratio = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 300; ++trial) {
      const CoefVec x = rng.coef(16);
      const CoefVec z = rng.coef(16);
      const double d = bregman_fp(z, x, e);
      CHECK(d >= -1e-12);
      CHECK(d > 0.0);

      const double cross = bregman_fq_dual(duality_map_p(x, e), duality_map_p(z, e), e);
      worst_cross = std::max(worst_cross, std::fabs(d - cross) / std::max(1.0, std::fabs(d)));

      const CoefVec diff = x - z;
      CHECK(d <= theory::c_tilde_p(p) * std::pow(lp_norm(diff, e), p) * (1.0 + 1e-12));

      // Entry bounds |x_i| <= c1, |x_i - z_i| <= c2 via the l^p norms; the
      // bound then holds entrywise, hence with the l^2 norm of the difference.
      const double c1 = lp_norm(x, e);
      const double c2 = lp_norm(diff, e);
      const double d2 = l2_norm(diff);
      const double lower = theory::c_p_lower(p, c1, c2) * d2 * d2;
      CHECK(d >= lower - 1e-10 * std::max(1.0, lower));

      const DualVec a = rng.dual(16);
      const DualVec b = rng.dual(16);
      const double dq = bregman_fq_dual(a, b, e);
      min_dual_ratio = std::min(min_dual_ratio, dq / std::pow(lq_norm(a - b, e), e.q()));
    }
    CHECK(worst_cross <= 1e-10);
    CHECK(min_dual_ratio > 0.0);
  }
}

TEST_CASE("pairing and l2_norm") {
  CHECK(pairing(DualVec{1.0, 2.0}, CoefVec{3.0, -4.0}) == doctest::Approx(-5.0));
  CHECK(l2_norm(CoefVec{3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(l2_norm(CoefVec{}) == 0.0);
}

TEST_CASE("Bregman distance of nearby points keeps its relative accuracy") {
  Rng rng(22);
  for (double p : {1.1, 1.5, 1.9}) {
    const Exponent e(p);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      for (int trial = 0; trial < 20; ++trial) {
        const CoefVec x = rng.coef_away_from_zero(8, 0.1, 2.0);
        const CoefVec z = x + eps * rng.coef(8);
        // Reference in long double from the defining formula.
        long double ref = 0.0L;
        const long double pl = p;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const long double xi = x[i], zi = z[i];
          const long double sx = xi > 0 ? 1.0L : -1.0L;
          ref += (std::pow(std::fabs(zi), pl) - std::pow(std::fabs(xi), pl)) / pl -
                 sx * std::pow(std::fabs(xi), pl - 1.0L) * (zi - xi);
        }
        const double d = bregman_fp(z, x, e);
        // The reference itself loses about 1e-19 / eps^2 to cancellation.
        CHECK(std::fabs(d - static_cast<double>(ref)) <= 1e-12 * std::fabs(static_cast<double>(ref)) + 1e-19);
      }
    }
  }
}
