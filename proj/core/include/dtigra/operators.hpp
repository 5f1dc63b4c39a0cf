#pragma once

// Forward operators mapping coefficient vectors to signals: the
// autoconvolution G, the orthonormal Haar synthesis T and F = G o T.

#include <cstddef>
#include <vector>

#include "dtigra/seqspace.hpp"
#include "dtigra/signal.hpp"

namespace dtigra {

/// Differentiable map from l^p coefficients into the signal space Y.
///
/// `adjoint_derivative` must be the exact transpose of `derivative` with
/// respect to the pairing on coefficients and `l2_inner` on signals.
class ForwardOperator {
 public:
  virtual ~ForwardOperator() = default;

  virtual std::size_t domain_size() const = 0;
  virtual std::size_t range_size() const = 0;

  virtual Signal apply(const CoefVec& x) const = 0;
  /// F'(x) h
  virtual Signal derivative(const CoefVec& x, const CoefVec& h) const = 0;
  /// F'(x)^* w
  virtual DualVec adjoint_derivative(const CoefVec& x, const Signal& w) const = 0;
};

/// Causal autoconvolution (Gf)_m = (1/n) sum_{i<=m} f_i f_{m+1-i} on n grid points.
class AutoconvOp {
 public:
  explicit AutoconvOp(std::size_t n);

  std::size_t grid_size() const { return n_; }

  Signal apply(const Signal& f) const;
  /// G'(f) h = 2 (f * h)
  Signal derivative(const Signal& f, const Signal& h) const;
  /// Exact transpose of derivative(f, .) under l2_inner.
  Signal adjoint(const Signal& f, const Signal& w) const;

 private:
  void check(const Signal& s) const;
  std::size_t n_;
};

/// Orthonormal Haar synthesis on 2^J samples.
///
/// Coefficient order (0-based): 0 is the scaling function (constant 1), then
/// wavelets level by level l = 0..J-1, shift k = 0..2^l-1 within a level, so
/// the wavelet (l, k) sits at index 2^l + k. Wavelets are positive on the
/// left half of their support. Every basis signal has unit l2_norm.
class HaarSynthesis {
 public:
  explicit HaarSynthesis(unsigned levels);

  unsigned levels() const { return levels_; }
  std::size_t size() const { return std::size_t{1} << levels_; }

  /// T x
  Signal synthesize(const CoefVec& x) const;
  /// T^* f = {<f, u_i>}; the inverse of synthesize.
  CoefVec analyze(const Signal& f) const;

  /// 0-based index of wavelet (level, shift).
  static std::size_t wavelet_index(unsigned level, std::size_t shift) {
    return (std::size_t{1} << level) + shift;
  }

 private:
  unsigned levels_;
};

/// F = G o T : l^p -> L^2[0,1].
class ComposedForward final : public ForwardOperator {
 public:
  explicit ComposedForward(unsigned levels);

  const HaarSynthesis& synthesis() const { return synthesis_; }
  const AutoconvOp& autoconv() const { return autoconv_; }

  std::size_t domain_size() const override { return synthesis_.size(); }
  std::size_t range_size() const override { return autoconv_.grid_size(); }

  Signal apply(const CoefVec& x) const override;
  Signal derivative(const CoefVec& x, const CoefVec& h) const override;
  DualVec adjoint_derivative(const CoefVec& x, const Signal& w) const override;

 private:
  HaarSynthesis synthesis_;
  AutoconvOp autoconv_;
};

/// Linear operator F(x) = A x with A an m x n row-major matrix. Y carries the
/// same midpoint inner product as every Signal, so the adjoint is A^T w / m.
class MatrixOperator final : public ForwardOperator {
 public:
  MatrixOperator(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  double at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::size_t domain_size() const override { return cols_; }
  std::size_t range_size() const override { return rows_; }

  Signal apply(const CoefVec& x) const override;
  Signal derivative(const CoefVec& x, const CoefVec& h) const override;
  DualVec adjoint_derivative(const CoefVec& x, const Signal& w) const override;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

}  // namespace dtigra
