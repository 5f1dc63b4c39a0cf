#include "dtigra/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtigra {

// ---------------------------------------------------------------------------
// Autoconvolution

AutoconvOp::AutoconvOp(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("AutoconvOp: grid size must be >= 1");
}

void AutoconvOp::check(const Signal& s) const {
  require_same_size(s.grid_size(), n_, "autoconvolution grid");
}

Signal AutoconvOp::apply(const Signal& f) const {
  check(f);
  const auto v = f.samples();
  const double w = 1.0 / static_cast<double>(n_);
  Signal out(n_);
  for (std::size_t m = 0; m < n_; ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i <= m; ++i) s += v[i] * v[m - i];
    out[m] = w * s;
  }
  return out;
}

Signal AutoconvOp::derivative(const Signal& f, const Signal& h) const {
  check(f);
  check(h);
  const auto fv = f.samples();
  const auto hv = h.samples();
  const double w = 2.0 / static_cast<double>(n_);
  Signal out(n_);
  for (std::size_t m = 0; m < n_; ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i <= m; ++i) s += fv[m - i] * hv[i];
    out[m] = w * s;
  }
  return out;
}

Signal AutoconvOp::adjoint(const Signal& f, const Signal& wsig) const {
  check(f);
  check(wsig);
  const auto fv = f.samples();
  const auto wv = wsig.samples();
  const double w = 2.0 / static_cast<double>(n_);
  Signal out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t m = i; m < n_; ++m) s += fv[m - i] * wv[m];
    out[i] = w * s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Haar synthesis
//
// With H the Euclidean-orthonormal Haar matrix, the basis is orthonormal for
// the midpoint inner product when x = H f / sqrt(n) and f = sqrt(n) H^T x.

HaarSynthesis::HaarSynthesis(unsigned levels) : levels_(levels) {
  if (levels > 30) throw std::invalid_argument("HaarSynthesis: too many levels");
}

CoefVec HaarSynthesis::analyze(const Signal& f) const {
  const std::size_t n = size();
  require_same_size(f.grid_size(), n, "haar_analyze");
  std::vector<double> a(f.samples().begin(), f.samples().end());
  std::vector<double> tmp(n);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t len = n; len > 1; len /= 2) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      tmp[k] = r * (a[2 * k] + a[2 * k + 1]);
      tmp[half + k] = r * (a[2 * k] - a[2 * k + 1]);
    }
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(len), a.begin());
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : a) v *= s;
  return CoefVec(std::move(a));
}

Signal HaarSynthesis::synthesize(const CoefVec& x) const {
  const std::size_t n = size();
  require_same_size(x.size(), n, "haar_synthesize");
  std::vector<double> a(x.values().begin(), x.values().end());
  std::vector<double> tmp(n);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t len = 2; len <= n; len *= 2) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      tmp[2 * k] = r * (a[k] + a[half + k]);
      tmp[2 * k + 1] = r * (a[k] - a[half + k]);
    }
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(len), a.begin());
  }
  const double s = std::sqrt(static_cast<double>(n));
  for (double& v : a) v *= s;
  return Signal(std::move(a));
}

// ---------------------------------------------------------------------------
// F = G o T

ComposedForward::ComposedForward(unsigned levels)
    : synthesis_(levels), autoconv_(std::size_t{1} << levels) {}

Signal ComposedForward::apply(const CoefVec& x) const {
  return autoconv_.apply(synthesis_.synthesize(x));
}

Signal ComposedForward::derivative(const CoefVec& x, const CoefVec& h) const {
  return autoconv_.derivative(synthesis_.synthesize(x), synthesis_.synthesize(h));
}

DualVec ComposedForward::adjoint_derivative(const CoefVec& x, const Signal& w) const {
  const CoefVec c = synthesis_.analyze(autoconv_.adjoint(synthesis_.synthesize(x), w));
  return DualVec(c.vec());
}

// ---------------------------------------------------------------------------
// Dense linear operator

MatrixOperator::MatrixOperator(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), a_(std::move(row_major)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("MatrixOperator: empty matrix");
  if (a_.size() != rows * cols) {
    throw std::invalid_argument("MatrixOperator: expected " + std::to_string(rows * cols) +
                                " entries, got " + std::to_string(a_.size()));
  }
}

Signal MatrixOperator::apply(const CoefVec& x) const {
  require_same_size(x.size(), cols_, "MatrixOperator::apply");
  Signal out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += at(r, c) * x[c];
    out[r] = s;
  }
  return out;
}

Signal MatrixOperator::derivative(const CoefVec& x, const CoefVec& h) const {
  require_same_size(x.size(), cols_, "MatrixOperator::derivative");
  return apply(h);
}

DualVec MatrixOperator::adjoint_derivative(const CoefVec& x, const Signal& w) const {
  require_same_size(x.size(), cols_, "MatrixOperator::adjoint_derivative");
  require_same_size(w.grid_size(), rows_, "MatrixOperator::adjoint_derivative");
  DualVec out(cols_);
  const double inv_m = 1.0 / static_cast<double>(rows_);
  for (std::size_t c = 0; c < cols_; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) s += at(r, c) * w[r];
    out[c] = inv_m * s;
  }
  return out;
}

}  // namespace dtigra
