#include "dtigra/tikhonov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dtigra {

ProblemInstance::ProblemInstance(std::shared_ptr<const ForwardOperator> forward, Signal data,
                                 double delta, Exponent exponent)
    : forward_(std::move(forward)), data_(std::move(data)), delta_(delta), exponent_(exponent) {
  if (!forward_) throw std::invalid_argument("ProblemInstance: null forward operator");
  if (!(delta_ >= 0.0) || !std::isfinite(delta_)) {
    throw std::invalid_argument("ProblemInstance: delta must be finite and >= 0");
  }
  require_same_size(data_.grid_size(), forward_->range_size(), "ProblemInstance data");
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("regularization parameter alpha must be positive, got " +
                                std::to_string(alpha));
  }
}

}  // namespace

double phi_value(const ProblemInstance& prob, double alpha, const CoefVec& x) {
  check_alpha(alpha);
  const double r = l2_norm(prob.forward().apply(x) - prob.data());
  return 0.5 * r * r + alpha * fp_value(x, prob.exponent());
}

DualVec phi_gradient(const ProblemInstance& prob, double alpha, const CoefVec& x) {
  check_alpha(alpha);
  const Signal res = prob.forward().apply(x) - prob.data();
  return prob.forward().adjoint_derivative(x, res) + alpha * duality_map_p(x, prob.exponent());
}

double residual_norm(const ProblemInstance& prob, const CoefVec& x) {
  return l2_norm(prob.forward().apply(x) - prob.data());
}

Evaluation evaluate(const ProblemInstance& prob, double alpha, const CoefVec& x) {
  check_alpha(alpha);
  const Signal res = prob.forward().apply(x) - prob.data();
  Evaluation ev;
  ev.residual = l2_norm(res);
  ev.phi = 0.5 * ev.residual * ev.residual + alpha * fp_value(x, prob.exponent());
  ev.gradient =
      prob.forward().adjoint_derivative(x, res) + alpha * duality_map_p(x, prob.exponent());
  ev.grad_norm = lq_norm(ev.gradient, prob.exponent());
  return ev;
}

}  // namespace dtigra
