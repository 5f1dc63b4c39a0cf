#pragma once

// Dual-space gradient descent for Tikhonov functionals with l^p penalties:
// the dual TIGRA continuation method and the dual modified Landweber baseline.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dtigra/seqspace.hpp"
#include "dtigra/theory.hpp"
#include "dtigra/tikhonov.hpp"

namespace dtigra {

enum class StopReason { Discrepancy, OuterCap, AlphaFloor, Stalled };

std::string to_string(StopReason r);

/// beta = min(1 / ||grad||, cap)
struct PracticalStep {
  double cap = 0.02;
};

/// beta = min{gamma c_bar_{j,k} alpha / ||grad||^2, 1 / (2 M_alpha)}
struct TheoreticalStep {
  theory::TheoryConstants constants;
};

using StepPolicy = std::variant<PracticalStep, TheoreticalStep>;

struct DtigraConfig {
  double alpha0 = 1e6;
  double qbar = 0.7;
  double tau = 2.0;
  StepPolicy step_policy = PracticalStep{};
  double inner_grad_factor = 1.5;  // C_{alpha_j} = inner_grad_factor * alpha_j
  std::size_t inner_max_iters = 3000;
  std::size_t outer_max_iters = 200;
  double alpha_floor = 0.0;

  /// Throws std::invalid_argument for an inadmissible configuration.
  void validate() const;
};

struct TraceRecord {
  std::size_t j = 0;
  std::size_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;  // 0 on the record that closes an inner loop
  double phi = 0.0;
  double grad_norm = 0.0;
  double residual = 0.0;
  std::uint64_t iterate_hash = 0;  // FNV-1a of the iterate's bytes
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  StopReason stop_reason = StopReason::OuterCap;
};

struct SolverResult {
  CoefVec x_final;
  double alpha_final = 0.0;
  std::size_t j_star = 0;  // 0-based index of the final outer level
  std::size_t k_star = 0;  // number of executed dual steps over all levels
  double final_residual = 0.0;
  std::optional<double> relative_error;  // ||x - x_true||_2 / ||x_true||_2
  SolverTrace trace;
};

/// Raised when an iterate, functional value or gradient becomes non-finite.
/// Carries the trace up to and including the offending record.
class NumericalBreakdown : public std::runtime_error {
 public:
  NumericalBreakdown(const std::string& what, SolverTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const SolverTrace& trace() const { return trace_; }

 private:
  SolverTrace trace_;
};

std::uint64_t iterate_hash(const CoefVec& x);

/// J_q(J_p(x) - beta * grad)
CoefVec dual_step(const CoefVec& x, const DualVec& grad, double beta, const Exponent& e);
/// J_q(J_p(x) - beta * grad Phi_alpha(x))
CoefVec dual_step(const ProblemInstance& prob, double alpha, const CoefVec& x, double beta);

double practical_step_size(double grad_norm, double cap);

/// Approximates phi_{j,k} = min_{t > 0} Phi_alpha(J_q(J_p(x) - t grad)) by golden-section
/// search on (0, 10/||grad||] with 60 iterations.
double line_minimum(const ProblemInstance& prob, double alpha, const CoefVec& x,
                    const Evaluation& ev);

double theoretical_step_size(const ProblemInstance& prob, double alpha, const CoefVec& x,
                             const theory::TheoryConstants& constants);
double theoretical_step_size(const ProblemInstance& prob, double alpha, const CoefVec& x,
                             const Evaluation& ev, const theory::TheoryConstants& constants);

double relative_error(const CoefVec& x, const CoefVec& x_true);

SolverResult dtigra_solve(const ProblemInstance& prob, const CoefVec& x0, const DtigraConfig& cfg,
                          const std::optional<CoefVec>& x_true = std::nullopt);

/// alpha_k = start_norm / (2 (k + 1000)^0.99)
double landweber_alpha(std::size_t k, double start_norm);

struct LandweberConfig {
  double tau = 2.0;
  double beta_cap = 0.02;
  std::size_t max_iters = 200000;
};

/// Dual modified Landweber iteration; the alpha schedule is scaled by ||x0||_p.
SolverResult landweber_solve(const ProblemInstance& prob, const CoefVec& x0,
                             const LandweberConfig& cfg,
                             const std::optional<CoefVec>& x_true = std::nullopt);

/// I.i.d. standard-normal entries rescaled to ||x||_p = target_norm.
CoefVec random_start(std::size_t n, double target_norm, const Exponent& e, std::uint64_t seed);

}  // namespace dtigra
