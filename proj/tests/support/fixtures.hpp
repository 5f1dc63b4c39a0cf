#pragma once

// Test-only helpers: seeded random generators and independent oracles that do
// not share code paths with the library implementation.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "dtigra/operators.hpp"
#include "dtigra/seqspace.hpp"
#include "dtigra/signal.hpp"
#include "dtigra/tikhonov.hpp"

namespace dtigra::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  std::vector<double> normals(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = normal();
    return v;
  }

  CoefVec coef(std::size_t n) { return CoefVec(normals(n)); }
  DualVec dual(std::size_t n) { return DualVec(normals(n)); }
  Signal signal(std::size_t n) { return Signal(normals(n)); }

  /// Entries with |x_i| in [lo, hi] and random sign.
  CoefVec coef_away_from_zero(std::size_t n, double lo, double hi) {
    CoefVec x(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = uniform(lo, hi);
      x[i] = uniform(0.0, 1.0) < 0.5 ? -mag : mag;
    }
    return x;
  }

 private:
  std::mt19937_64 gen_;
};

/// Haar basis signal u_i evaluated from its definition (0-based index).
inline Signal haar_basis_signal(std::size_t index, unsigned levels) {
  const std::size_t n = std::size_t{1} << levels;
  Signal u(n);
  if (index == 0) {
    for (std::size_t m = 0; m < n; ++m) u[m] = 1.0;
    return u;
  }
  unsigned level = 0;
  while ((std::size_t{2} << level) <= index) ++level;
  const std::size_t shift = index - (std::size_t{1} << level);
  const std::size_t width = n >> level;  // samples in the support
  const double height = std::sqrt(static_cast<double>(std::size_t{1} << level));
  for (std::size_t m = 0; m < width; ++m) {
    u[shift * width + m] = m < width / 2 ? height : -height;
  }
  return u;
}

/// Dense Gaussian elimination with partial pivoting for small systems.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
    }
    for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return x;
}

/// Small linear test problem F(x) = A x (A square, well conditioned), with
/// the p = 2 Tikhonov minimizer available in closed form.
struct LinearProblem {
  std::size_t n = 4;
  std::vector<double> a;  // row-major n x n
  CoefVec x_true;
  Signal y;
  std::shared_ptr<MatrixOperator> op;

  static LinearProblem make(std::uint64_t seed, std::size_t n = 4) {
    Rng rng(seed);
    LinearProblem lp;
    lp.n = n;
    lp.a.resize(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) lp.a[r * n + c] = (r == c ? 2.0 : 0.0) + 0.5 * rng.uniform(-1.0, 1.0);
    }
    lp.op = std::make_shared<MatrixOperator>(n, n, lp.a);
    lp.x_true = CoefVec(n);
    for (std::size_t i = 0; i < n; ++i) lp.x_true[i] = rng.uniform(-1.0, 1.0);
    lp.y = lp.op->apply(lp.x_true);
    return lp;
  }

  /// argmin 1/2 ||A x - y||_Y^2 + alpha/2 ||x||^2 with ||w||_Y^2 = (1/n) sum w_i^2:
  /// (A^T A / n + alpha I) x = A^T y / n.
  CoefVec tikhonov_minimizer(const Signal& data, double alpha) const {
    std::vector<double> m(n * n, 0.0);
    std::vector<double> rhs(n, 0.0);
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += a[r * n + i] * a[r * n + j];
        m[i * n + j] = w * s + (i == j ? alpha : 0.0);
      }
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += a[r * n + i] * data[r];
      rhs[i] = w * s;
    }
    return CoefVec(solve_dense(m, rhs));
  }
};

}  // namespace dtigra::test
