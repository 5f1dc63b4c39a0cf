#pragma once

// Finite truncations of l^p / l^q sequences: norms, the penalty f_p,
// the duality mappings J_p / J_q and Bregman distances.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dtigra {

/// Conjugate exponent pair 1 < p <= 2, 1/p + 1/q = 1. q is always derived from p.
class Exponent {
 public:
  explicit Exponent(double p);

  double p() const { return p_; }
  double q() const { return p_ / (p_ - 1.0); }

 private:
  double p_;
};

namespace detail {

// Shared storage for the primal and dual sequence types. Entries are
// checked to be finite on construction.
template <class Tag>
class SeqVec {
 public:
  SeqVec() = default;
  explicit SeqVec(std::size_t n) : v_(n, 0.0) {}
  explicit SeqVec(std::vector<double> v);
  SeqVec(std::initializer_list<double> v) : SeqVec(std::vector<double>(v)) {}

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }

  std::span<const double> values() const { return v_; }
  std::span<double> values() { return v_; }
  const std::vector<double>& vec() const { return v_; }

  bool operator==(const SeqVec&) const = default;

 private:
  std::vector<double> v_;
};

struct CoefTag {};
struct DualTag {};

}  // namespace detail

/// Primal coefficient vector x in l^p.
using CoefVec = detail::SeqVec<detail::CoefTag>;
/// Dual vector in l^q (J_p(x), gradients).
using DualVec = detail::SeqVec<detail::DualTag>;

// Entry-wise linear algebra helpers. All binary operations throw
// std::invalid_argument on length mismatch.
CoefVec operator+(const CoefVec& a, const CoefVec& b);
CoefVec operator-(const CoefVec& a, const CoefVec& b);
CoefVec operator*(double s, const CoefVec& a);
DualVec operator+(const DualVec& a, const DualVec& b);
DualVec operator-(const DualVec& a, const DualVec& b);
DualVec operator*(double s, const DualVec& a);

/// Duality pairing <xi, x> = sum xi_i x_i.
double pairing(const DualVec& xi, const CoefVec& x);
double dot(std::span<const double> a, std::span<const double> b);

/// Euclidean norm of the entries (used for error metrics).
double l2_norm(const CoefVec& x);

double lp_norm(const CoefVec& x, const Exponent& e);
/// ||xi||_q with q the conjugate of e.p().
double lq_norm(const DualVec& xi, const Exponent& e);

/// f_p(x) = (1/p) sum |x_i|^p.
double fp_value(const CoefVec& x, const Exponent& e);
/// f_q(xi) = (1/q) sum |xi_i|^q.
double fq_value(const DualVec& xi, const Exponent& e);

/// J_p(x)_i = sign(x_i) |x_i|^{p-1}.
DualVec duality_map_p(const CoefVec& x, const Exponent& e);
/// J_q(xi)_i = sign(xi_i) |xi_i|^{q-1}; left inverse of duality_map_p.
CoefVec duality_map_q(const DualVec& xi, const Exponent& e);

/// D_{f_p}(z, x) = f_p(z) - f_p(x) - <J_p(x), z - x>.
double bregman_fp(const CoefVec& z, const CoefVec& x, const Exponent& e);
/// D_{f_q}(a, b) = f_q(a) - f_q(b) - <J_q(b), a - b>.
double bregman_fq_dual(const DualVec& a, const DualVec& b, const Exponent& e);

void require_same_size(std::size_t a, std::size_t b, const char* what);

}  // namespace dtigra
