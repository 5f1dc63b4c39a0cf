#include "dtigra/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtigra::theory {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

double conj(double p) { return p / (p - 1.0); }

}  // namespace

void validate(const AssumptionParams& a) {
  require(positive_finite(a.c), "nonlinearity constant c must be positive");
  require(positive_finite(a.L), "Lipschitz constant L must be positive");
  require(std::isfinite(a.s) && a.s > 2.0, "scaling parameter s must exceed 2");
  require(positive_finite(a.varrho), "source bound varrho must be positive");
  require(a.s * a.c * a.varrho < 1.0, "smallness condition s*c*varrho < 1 violated");
  require(positive_finite(a.delta), "noise level delta must be positive");
  require(positive_finite(a.K), "derivative bound K must be positive");
  require(positive_finite(a.A), "norm bound A must be positive");
  require(a.p > 1.0 && a.p <= 2.0, "exponent p must satisfy 1 < p <= 2");
}

double alpha_star(const AssumptionParams& a) {
  require(a.s > 2.0, "alpha_star requires s > 2");
  require(positive_finite(a.varrho), "alpha_star requires varrho > 0");
  return a.delta / ((a.s - 2.0) * a.varrho);
}

double gamma(const AssumptionParams& a) {
  const double scr = a.s * a.c * a.varrho;
  require(scr < 1.0, "gamma requires s*c*varrho < 1");
  return (1.0 - scr) / 2.0;
}

double qbar0(const AssumptionParams& a) {
  const double scr = a.s * a.c * a.varrho;
  require(scr < 1.0, "qbar0 requires s*c*varrho < 1");
  return 2.0 * scr / (1.0 + scr);
}

double tau_discrepancy(double qbar, double s) {
  require(qbar > 0.0 && qbar < 1.0, "tau requires 0 < qbar < 1");
  require(s > 2.0, "tau requires s > 2");
  return 2.0 + 2.0 / (qbar * (s - 2.0));
}

double norm_bound_A(double p, double alpha_star, double misfit_at_zero) {
  require(p > 1.0 && p <= 2.0, "norm_bound_A: 1 < p <= 2");
  require(positive_finite(alpha_star), "norm_bound_A: alpha_star must be positive");
  return std::pow(p / (2.0 * alpha_star), 1.0 / p) * std::pow(misfit_at_zero, 2.0 / p);
}

double derivative_bound_K(double L, double A, double deriv_norm_at_zero) {
  return L * A + deriv_norm_at_zero;
}

double c_tilde_p(double p) { return std::pow(2.0, 2.0 - p); }

double c_p_lower(double p, double c1, double c2) {
  return 0.5 * (p - 1.0) * std::pow(c1 + c2, p - 2.0);
}

double r_alpha(const AssumptionParams& a, double alpha) {
  const double astar = alpha_star(a);
  if (!(alpha >= astar)) {
    throw std::invalid_argument("r_alpha: alpha = " + std::to_string(alpha) +
                                " is below alpha_star = " + std::to_string(astar));
  }
  const double g = gamma(a);
  const double first = g * alpha / (a.c * a.s * a.K);
  const double second = std::sqrt(g * alpha / (10.0 * a.c * a.L));
  return 2.0 / (1.0 + std::sqrt(2.0)) * std::min(first, second);
}

double c_A(const AssumptionParams& a) { return 0.5 * (a.p - 1.0) * std::pow(3.0 * a.A, a.p - 2.0); }

double c_bar_A(const AssumptionParams& a, double alpha) {
  return 0.5 * (a.p - 1.0) * std::pow(2.0 * r_alpha(a, alpha) + a.A, a.p - 2.0);
}

double c_tilde_q_alpha(const AssumptionParams& a, double alpha) {
  const double q = conj(a.p);
  const double r = r_alpha(a, alpha);
  const double base = 2.0 * std::pow(r + a.A, a.p - 1.0) + r;
  return std::max(1.0, 0.5 * (q - 1.0) * std::pow(base, q - 2.0));
}

double sigma(const AssumptionParams& a) {
  const double scr = a.s * a.c * a.varrho;
  return 2.0 * a.s * a.varrho * a.K / (c_A(a) * (1.0 - scr) * alpha_star(a));
}

double rho_upd(const AssumptionParams& a, double alpha0) {
  const double first = std::pow(c_tilde_p(a.p), 1.0 / a.p);
  const double second = 2.0 * std::pow(a.A, a.p - 1.0) + std::pow(r_alpha(a, alpha0), a.p - 1.0);
  return std::max(first, second);
}

double default_d_alpha(const AssumptionParams& a, double alpha) {
  const double r = r_alpha(a, alpha);
  return c_bar_A(a, alpha) * r * r;
}

namespace {

// Shared bound c d + (L r + K) r + s varrho alpha on ||F(x) - y^delta||.
double misfit_bound(const AssumptionParams& a, double alpha, double r, double d) {
  return a.c * d + (a.L * r + a.K) * r + a.s * a.varrho * alpha;
}

}  // namespace

double kappa_alpha(const AssumptionParams& a, double alpha, double d_alpha) {
  const double r = r_alpha(a, alpha);
  return (a.L * r + a.K) * misfit_bound(a, alpha, r, d_alpha) +
         alpha * std::pow(r + a.A, a.p - 1.0);
}

double T_alpha(const AssumptionParams& a, double alpha, double C_alpha) {
  require(positive_finite(C_alpha), "T_alpha requires C_alpha > 0");
  return r_alpha(a, alpha) / (c_tilde_q_alpha(a, alpha) * C_alpha);
}

double c_p_alpha(const AssumptionParams& a, double alpha, double T, double kappa) {
  const double r = r_alpha(a, alpha);
  return 0.5 * (a.p - 1.0) *
         std::pow(3.0 * (r + a.A) + 2.0 * std::pow(T * kappa, a.p - 1.0), a.p - 2.0);
}

double M_alpha(const AssumptionParams& a, double alpha, double d_alpha, double T, double kappa,
               double cp) {
  const double r = r_alpha(a, alpha);
  return a.c * a.c * T * T * kappa * kappa / (2.0 * cp) + (a.L * r + a.K) / cp +
         a.c * misfit_bound(a, alpha, r, d_alpha) + alpha;
}

double c_bar_jk(const AssumptionParams& a, double alpha, double phi_gap) {
  const double r = r_alpha(a, alpha);
  const double cbar = c_bar_A(a, alpha);
  const double denom = 4.0 * a.K * a.K + 4.0 * a.L * a.s * a.varrho * alpha +
                       4.0 * a.L * a.K * r + a.L * a.L * r * r +
                       8.0 * alpha * c_tilde_p(a.p) * std::pow(cbar, (2.0 - a.p) / 2.0);
  return std::min(1.0, 8.0 * cbar * std::max(phi_gap, 0.0) / denom);
}

double inner_stop_ceiling(const AssumptionParams& a, double alpha_j, double alpha_next,
                          const DAlphaPolicy& d_alpha) {
  const double r = r_alpha(a, alpha_j);
  const double cbar = c_bar_A(a, alpha_j);
  const double first = d_alpha(a, alpha_next) / (3.0 * r);
  const double second = a.delta * cbar / (a.K + r * (a.c * cbar + a.L));
  return gamma(a) * alpha_j * std::min(first, second);
}

bool qbar_admissible(const AssumptionParams& a, double alpha0, double qbar,
                     const DAlphaPolicy& d_alpha) {
  if (!(qbar > qbar0(a) && qbar < 1.0)) return false;
  const double lhs = rho_upd(a, alpha0) * sigma(a) * alpha0 * (1.0 - qbar);
  const double rhs = std::min(d_alpha(a, alpha_star(a)) / 3.0, 1.0);
  return lhs <= rhs;
}

TheoryConstants::TheoryConstants(AssumptionParams params, double inner_grad_factor,
                                 DAlphaPolicy d_alpha)
    : params_(params), inner_grad_factor_(inner_grad_factor), d_alpha_(std::move(d_alpha)) {
  validate(params_);
  require(positive_finite(inner_grad_factor_), "inner_grad_factor must be positive");
  require(static_cast<bool>(d_alpha_), "d_alpha policy must be callable");
}

AlphaConstants TheoryConstants::at(double alpha) const {
  AlphaConstants k;
  k.alpha = alpha;
  k.r_alpha = r_alpha(params_, alpha);
  k.d_alpha = d_alpha_(params_, alpha);
  require(positive_finite(k.d_alpha), "d_alpha policy returned a non-positive value");
  k.c_bar_A = c_bar_A(params_, alpha);
  k.c_tilde_q = c_tilde_q_alpha(params_, alpha);
  k.C_alpha = inner_grad_factor_ * alpha;
  k.kappa = kappa_alpha(params_, alpha, k.d_alpha);
  k.T = T_alpha(params_, alpha, k.C_alpha);
  k.c_p = c_p_alpha(params_, alpha, k.T, k.kappa);
  k.M = M_alpha(params_, alpha, k.d_alpha, k.T, k.kappa, k.c_p);
  return k;
}

}  // namespace dtigra::theory
