#pragma once

// The Tikhonov functional
//   Phi_alpha(x) = 1/2 ||F(x) - y^delta||^2 + alpha f_p(x)
// and its gradient in the dual space.

#include <memory>

#include "dtigra/operators.hpp"
#include "dtigra/seqspace.hpp"
#include "dtigra/signal.hpp"

namespace dtigra {

class ProblemInstance {
 public:
  ProblemInstance(std::shared_ptr<const ForwardOperator> forward, Signal data, double delta,
                  Exponent exponent);

  const ForwardOperator& forward() const { return *forward_; }
  std::shared_ptr<const ForwardOperator> forward_ptr() const { return forward_; }
  const Signal& data() const { return data_; }
  double delta() const { return delta_; }
  const Exponent& exponent() const { return exponent_; }
  std::size_t size() const { return forward_->domain_size(); }

 private:
  std::shared_ptr<const ForwardOperator> forward_;
  Signal data_;
  double delta_;
  Exponent exponent_;
};

/// Everything one gradient step needs at a point x, from a single forward evaluation.
struct Evaluation {
  double phi = 0.0;
  double residual = 0.0;  // ||F(x) - y^delta||
  DualVec gradient;
  double grad_norm = 0.0;  // ||gradient||_q
};

double phi_value(const ProblemInstance& prob, double alpha, const CoefVec& x);
DualVec phi_gradient(const ProblemInstance& prob, double alpha, const CoefVec& x);
double residual_norm(const ProblemInstance& prob, const CoefVec& x);

Evaluation evaluate(const ProblemInstance& prob, double alpha, const CoefVec& x);

}  // namespace dtigra
