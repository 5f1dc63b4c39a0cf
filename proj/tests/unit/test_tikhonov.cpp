#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "dtigra/tikhonov.hpp"
#include "support/fixtures.hpp"

using namespace dtigra;
using dtigra::test::LinearProblem;
using dtigra::test::Rng;

namespace {

ProblemInstance autoconv_problem(unsigned levels, double p, std::uint64_t seed) {
  auto fwd = std::make_shared<ComposedForward>(levels);
  Rng rng(seed);
  const CoefVec x = rng.coef(fwd->domain_size());
  const NoisyData nd = add_noise(fwd->apply(x), {0.01, seed});
  return ProblemInstance(fwd, nd.data, nd.delta, Exponent(p));
}

}  // namespace

TEST_CASE("ProblemInstance validation") {
  auto fwd = std::make_shared<ComposedForward>(3);
  CHECK_THROWS_AS(ProblemInstance(nullptr, Signal(8), 0.1, Exponent(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(ProblemInstance(fwd, Signal(4), 0.1, Exponent(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(ProblemInstance(fwd, Signal(8), -0.1, Exponent(1.5)), std::invalid_argument);
  CHECK_NOTHROW(ProblemInstance(fwd, Signal(8), 0.0, Exponent(1.5)));
}

TEST_CASE("phi_value") {
  const ProblemInstance prob = autoconv_problem(4, 1.4, 1);
  const std::size_t n = prob.size();
  const double yn = l2_norm(prob.data());
  CHECK(phi_value(prob, 2.0, CoefVec(n)) == doctest::Approx(0.5 * yn * yn).epsilon(1e-15));
  CHECK(residual_norm(prob, CoefVec(n)) == doctest::Approx(yn).epsilon(1e-15));

  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const CoefVec x = rng.coef(n);
    const double a1 = rng.uniform(0.01, 5.0);
    const double a2 = rng.uniform(0.01, 5.0);
    const double diff = phi_value(prob, a2, x) - phi_value(prob, a1, x);
    CHECK(diff == doctest::Approx((a2 - a1) * fp_value(x, prob.exponent())).epsilon(1e-12));

    // Recompose from the sub-operations.
    const auto& fwd = dynamic_cast<const ComposedForward&>(prob.forward());
    const Signal fx = fwd.autoconv().apply(fwd.synthesis().synthesize(x));
    double sq = 0.0;
    double pen = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = fx[i] - prob.data()[i];
      sq += r * r / static_cast<double>(n);
      pen += std::pow(std::fabs(x[i]), 1.4) / 1.4;
    }
    const double phi = phi_value(prob, a1, x);
    CHECK(std::fabs(phi - (0.5 * sq + a1 * pen)) <= 1e-13 * std::max(1.0, phi));
    CHECK(phi >= 0.0);

    const Evaluation ev = evaluate(prob, a1, x);
    CHECK(ev.phi == doctest::Approx(phi).epsilon(1e-14));
    CHECK(ev.residual == doctest::Approx(residual_norm(prob, x)).epsilon(1e-14));
    CHECK(ev.grad_norm == doctest::Approx(lq_norm(ev.gradient, prob.exponent())).epsilon(1e-14));
    const DualVec g = phi_gradient(prob, a1, x);
    for (std::size_t i = 0; i < n; ++i) CHECK(ev.gradient[i] == doctest::Approx(g[i]).epsilon(1e-13));
  }

  CHECK_THROWS_AS(phi_value(prob, 0.0, CoefVec(n)), std::invalid_argument);
  CHECK_THROWS_AS(phi_gradient(prob, -1.0, CoefVec(n)), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(prob, std::nan(""), CoefVec(n)), std::invalid_argument);
}

TEST_CASE("gradient vanishes at zero for the autoconvolution stack") {
  const ProblemInstance prob = autoconv_problem(5, 1.2, 3);
  const DualVec g = phi_gradient(prob, 0.7, CoefVec(prob.size()));
  for (double v : g.values()) CHECK(v == 0.0);
}

TEST_CASE("gradient matches central finite differences") {
  for (double p : {1.6, 2.0}) {
    const ProblemInstance prob = autoconv_problem(6, p, 4);
    Rng rng(40);
    const double eps = 1e-6;
    for (int trial = 0; trial < 50; ++trial) {
      const CoefVec x = rng.coef_away_from_zero(prob.size(), 0.1, 1.0);
      const CoefVec h = rng.coef(prob.size());
      const double alpha = rng.uniform(0.01, 1.0);
      const double directional = pairing(phi_gradient(prob, alpha, x), h);
      const double fd =
          (phi_value(prob, alpha, x + eps * h) - phi_value(prob, alpha, x - eps * h)) / (2.0 * eps);
      CHECK(std::fabs(directional - fd) <= 1e-5 * (1.0 + std::fabs(directional)));
    }
  }
}

TEST_CASE("phi decreases along the negative gradient") {
  const ProblemInstance prob = autoconv_problem(6, 1.5, 5);
  Rng rng(50);
  const double alpha = 0.05;
  for (int trial = 0; trial < 10; ++trial) {
    const CoefVec x = rng.coef(prob.size());
    const DualVec g = phi_gradient(prob, alpha, x);
    const CoefVec dir(std::vector<double>(g.vec()));
    const double phi0 = phi_value(prob, alpha, x);
    CHECK(phi_value(prob, alpha, x - 1e-6 * dir) < phi0);
  }
}

TEST_CASE("residual at the exact solution equals delta") {
  auto fwd = std::make_shared<ComposedForward>(9);
  CoefVec x_true(fwd->domain_size());
  x_true[1] = 3.0;
  x_true[3] = -1.0;
  x_true[6] = 0.5;
  const NoisyData nd = add_noise(fwd->apply(x_true), {0.05, 42});
  const ProblemInstance prob(fwd, nd.data, nd.delta, Exponent(1.2));
  CHECK(residual_norm(prob, x_true) == doctest::Approx(nd.delta).epsilon(1e-12));
}

TEST_CASE("gradient vanishes at the closed-form minimizer of a linear problem") {
  const LinearProblem lp = LinearProblem::make(77);
  const double alpha = 0.3;
  const ProblemInstance prob(lp.op, lp.y, 0.0, Exponent(2.0));
  const CoefVec xa = lp.tikhonov_minimizer(lp.y, alpha);
  CHECK(lq_norm(phi_gradient(prob, alpha, xa), prob.exponent()) <= 1e-8);
  CHECK(residual_norm(prob, lp.x_true) <= 1e-14);
}
