#pragma once

// Closed-form constants from the convergence analysis of the dual TIGRA
// iteration. They feed the theoretical step-size policy and are exposed
// through the `constants` CLI command.
//
// The radius d_alpha of the Bregman ball of convergence has no closed form;
// every quantity that depends on it takes a DAlphaPolicy.

#include <functional>

namespace dtigra::theory {

struct AssumptionParams {
  double c = 1.0;       // nonlinearity constant
  double L = 1.0;       // Lipschitz constant of F'
  double s = 3.0;       // scaling parameter, s > 2
  double varrho = 0.1;  // source-element bound, s c varrho < 1
  double delta = 0.01;  // noise level
  double K = 1.0;       // bound on ||F'(x_alpha^delta)||
  double A = 1.0;       // bound on ||x_alpha^delta||
  double p = 2.0;
};

/// Throws std::invalid_argument unless all params are admissible.
void validate(const AssumptionParams& a);

/// alpha_* = delta / ((s - 2) varrho)
double alpha_star(const AssumptionParams& a);
/// gamma = (1 - s c varrho) / 2
double gamma(const AssumptionParams& a);
/// qbar_0 = 2 s c varrho / (1 + s c varrho)
double qbar0(const AssumptionParams& a);
/// tau = 2 + 2 / (qbar (s - 2))
double tau_discrepancy(double qbar, double s);

/// A = (p / (2 alpha_*))^{1/p} ||F(0) - y^delta||^{2/p}
double norm_bound_A(double p, double alpha_star, double misfit_at_zero);
/// K = L A + ||F'(0)||
double derivative_bound_K(double L, double A, double deriv_norm_at_zero);

/// Admissible upper-bound constant 2^{2-p} for D_{f_p}(z,x) <= c~_p ||x - z||^p.
double c_tilde_p(double p);
/// Lower-bound constant ((p-1)/2)(c1 + c2)^{p-2} for ||x|| <= c1, ||x - z|| <= c2.
double c_p_lower(double p, double c1, double c2);

/// Radius of directional convexity,
/// (2/(1+sqrt 2)) min{ gamma alpha / (c s K), sqrt(gamma alpha / (10 c L)) }.
/// Throws for alpha < alpha_*.
double r_alpha(const AssumptionParams& a, double alpha);

/// c_A = ((p-1)/2)(3A)^{p-2}
double c_A(const AssumptionParams& a);
/// c_bar_A(alpha) = ((p-1)/2)(2 r_alpha + A)^{p-2}
double c_bar_A(const AssumptionParams& a, double alpha);
/// c~_q(alpha) = max{1, ((q-1)/2)(2 (r_alpha + A)^{p-1} + r_alpha)^{q-2}}
double c_tilde_q_alpha(const AssumptionParams& a, double alpha);
/// sigma = 2 s varrho K / (c_A (1 - s c varrho) alpha_*)
double sigma(const AssumptionParams& a);
/// rho = max{ c~_p^{1/p}, 2 A^{p-1} + r_{alpha0}^{p-1} }
double rho_upd(const AssumptionParams& a, double alpha0);

using DAlphaPolicy = std::function<double(const AssumptionParams&, double alpha)>;
/// Default d_alpha = c_bar_A(alpha) r_alpha^2.
double default_d_alpha(const AssumptionParams& a, double alpha);

/// kappa_alpha = (L r + K)(c d + (L r + K) r + s varrho alpha) + alpha (r + A)^{p-1}
double kappa_alpha(const AssumptionParams& a, double alpha, double d_alpha);
/// T_alpha = r_alpha / (c~_q(alpha) C_alpha)
double T_alpha(const AssumptionParams& a, double alpha, double C_alpha);
/// c_p(alpha) = ((p-1)/2)(3 (r + A) + 2 (T kappa)^{p-1})^{p-2}
double c_p_alpha(const AssumptionParams& a, double alpha, double T, double kappa);
/// M_alpha = c^2 T^2 kappa^2 / (2 c_p) + (L r + K)/c_p + c (c d + (L r + K) r + s varrho alpha) + alpha
double M_alpha(const AssumptionParams& a, double alpha, double d_alpha, double T, double kappa,
               double cp);

/// c_bar_{j,k} = min{1, 8 c_bar_A gap / (4K^2 + 4 L s varrho alpha + 4 L K r + L^2 r^2
///                                      + 8 alpha c~_p c_bar_A^{(2-p)/2})}
/// with gap = Phi_alpha(x_{j,k}) - phi_{j,k} >= 0.
double c_bar_jk(const AssumptionParams& a, double alpha, double phi_gap);

/// Ceiling for the inner stopping constant C_{alpha_j} given the next level alpha_{j+1}.
double inner_stop_ceiling(const AssumptionParams& a, double alpha_j, double alpha_next,
                          const DAlphaPolicy& d_alpha);

/// True iff rho sigma alpha0 (1 - qbar) <= min{d_{alpha_*}/3, 1} and qbar in (qbar_0, 1).
bool qbar_admissible(const AssumptionParams& a, double alpha0, double qbar,
                     const DAlphaPolicy& d_alpha);

/// All alpha-dependent constants evaluated at one alpha.
struct AlphaConstants {
  double alpha = 0.0;
  double r_alpha = 0.0;
  double d_alpha = 0.0;
  double c_bar_A = 0.0;
  double c_tilde_q = 0.0;
  double C_alpha = 0.0;
  double kappa = 0.0;
  double T = 0.0;
  double c_p = 0.0;
  double M = 0.0;
};

/// Bundle of assumption parameters plus the user choices the analysis leaves
/// open: the d_alpha policy and the inner stopping constant C_alpha = factor * alpha.
class TheoryConstants {
 public:
  explicit TheoryConstants(AssumptionParams params, double inner_grad_factor = 1.5,
                           DAlphaPolicy d_alpha = default_d_alpha);

  const AssumptionParams& params() const { return params_; }
  double inner_grad_factor() const { return inner_grad_factor_; }

  double alpha_star() const { return theory::alpha_star(params_); }
  double gamma() const { return theory::gamma(params_); }
  double qbar0() const { return theory::qbar0(params_); }
  double sigma() const { return theory::sigma(params_); }
  double c_tilde_p() const { return theory::c_tilde_p(params_.p); }
  double d_alpha(double alpha) const { return d_alpha_(params_, alpha); }
  const DAlphaPolicy& d_alpha_policy() const { return d_alpha_; }

  AlphaConstants at(double alpha) const;

 private:
  AssumptionParams params_;
  double inner_grad_factor_;
  DAlphaPolicy d_alpha_;
};

}  // namespace dtigra::theory
