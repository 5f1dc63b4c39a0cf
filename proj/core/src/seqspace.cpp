#include "dtigra/seqspace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dtigra {

Exponent::Exponent(double p) : p_(p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw std::invalid_argument("exponent p must satisfy 1 < p <= 2, got " + std::to_string(p));
  }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

namespace detail {

template <class Tag>
SeqVec<Tag>::SeqVec(std::vector<double> v) : v_(std::move(v)) {
  for (double x : v_) {
    if (!std::isfinite(x)) throw std::invalid_argument("sequence entries must be finite");
  }
}

template class SeqVec<CoefTag>;
template class SeqVec<DualTag>;

}  // namespace detail

namespace {

template <class V>
V add(const V& a, const V& b, double sb) {
  require_same_size(a.size(), b.size(), "vector arithmetic");
  V out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + sb * b[i];
  return out;
}

template <class V>
V scale(double s, const V& a) {
  V out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

double signed_pow(double t, double r) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::fabs(t), r), t);
}

double sum_abs_pow(std::span<const double> v, double r) {
  double s = 0.0;
  for (double t : v) s += std::pow(std::fabs(t), r);
  return s;
}

// Per-entry Bregman term of t -> |t|^r / r; each term is nonnegative up to rounding.
// ((1+u)^r - 1)/r - u, without the cancellation of the direct form near u = 0.
double bregman_unit(double u, double r) {
  if (std::fabs(u) >= 0.25) return std::expm1(r * std::log1p(u)) / r - u;
  double coeff = (r - 1.0) / 2.0;  // binom(r, k) / r at k = 2
  double power = u * u;
  double sum = coeff * power;
  for (int k = 3; k < 400; ++k) {
    coeff *= (r - (k - 1)) / k;
    power *= u;
    const double t = coeff * power;
    sum += t;
    if (std::fabs(t) <= 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// One entry of |z|^r/r - |x|^r/r - sign(x)|x|^{r-1}(z - x).
double bregman_entry(double z, double x, double r) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return std::pow(std::fabs(z), r) / r;
  if ((z > 0.0) != (x > 0.0) || z == 0.0) {
    // Opposite signs: every term is nonnegative.
    const double az = std::fabs(z);
    return std::pow(az, r) / r + std::pow(ax, r) * (1.0 - 1.0 / r) + std::pow(ax, r - 1.0) * az;
  }
  return std::pow(ax, r) * bregman_unit((z - x) / x, r);
}

double bregman_sum(std::span<const double> z, std::span<const double> x, double r) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += bregman_entry(z[i], x[i], r);
  return s;
}

}  // namespace

CoefVec operator+(const CoefVec& a, const CoefVec& b) { return add(a, b, 1.0); }
CoefVec operator-(const CoefVec& a, const CoefVec& b) { return add(a, b, -1.0); }
CoefVec operator*(double s, const CoefVec& a) { return scale(s, a); }
DualVec operator+(const DualVec& a, const DualVec& b) { return add(a, b, 1.0); }
DualVec operator-(const DualVec& a, const DualVec& b) { return add(a, b, -1.0); }
DualVec operator*(double s, const DualVec& a) { return scale(s, a); }

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double pairing(const DualVec& xi, const CoefVec& x) { return dot(xi.values(), x.values()); }

double l2_norm(const CoefVec& x) { return std::sqrt(dot(x.values(), x.values())); }

double lp_norm(const CoefVec& x, const Exponent& e) {
  return std::pow(sum_abs_pow(x.values(), e.p()), 1.0 / e.p());
}

double lq_norm(const DualVec& xi, const Exponent& e) {
  return std::pow(sum_abs_pow(xi.values(), e.q()), 1.0 / e.q());
}

double fp_value(const CoefVec& x, const Exponent& e) {
  return sum_abs_pow(x.values(), e.p()) / e.p();
}

double fq_value(const DualVec& xi, const Exponent& e) {
  return sum_abs_pow(xi.values(), e.q()) / e.q();
}

DualVec duality_map_p(const CoefVec& x, const Exponent& e) {
  DualVec out(x.size());
  const double r = e.p() - 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = signed_pow(x[i], r);
  return out;
}

CoefVec duality_map_q(const DualVec& xi, const Exponent& e) {
  CoefVec out(xi.size());
  const double r = e.q() - 1.0;
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = signed_pow(xi[i], r);
  return out;
}

double bregman_fp(const CoefVec& z, const CoefVec& x, const Exponent& e) {
  require_same_size(z.size(), x.size(), "bregman_fp");
  return bregman_sum(z.values(), x.values(), e.p());
}

double bregman_fq_dual(const DualVec& a, const DualVec& b, const Exponent& e) {
  require_same_size(a.size(), b.size(), "bregman_fq_dual");
  return bregman_sum(a.values(), b.values(), e.q());
}

}  // namespace dtigra
