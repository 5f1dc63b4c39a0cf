#include "dtigra/solvers.hpp"

#include <cmath>
#include <cstring>
#include <random>

namespace dtigra {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Discrepancy: return "Discrepancy";
    case StopReason::OuterCap: return "OuterCap";
    case StopReason::AlphaFloor: return "AlphaFloor";
    case StopReason::Stalled: return "Stalled";
  }
  return "Unknown";
}

void DtigraConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(std::string("DtigraConfig: ") + msg);
  };
  require(std::isfinite(alpha0) && alpha0 > 0.0, "alpha0 must be positive");
  require(qbar > 0.0 && qbar < 1.0, "qbar must lie in (0, 1)");
  require(std::isfinite(tau) && tau > 1.0, "tau must exceed 1");
  require(std::isfinite(inner_grad_factor) && inner_grad_factor > 0.0,
          "inner_grad_factor must be positive");
  require(alpha_floor >= 0.0, "alpha_floor must be >= 0");
  require(alpha0 > alpha_floor, "alpha0 must exceed alpha_floor");
  require(outer_max_iters >= 1, "outer_max_iters must be >= 1");
  if (const auto* p = std::get_if<PracticalStep>(&step_policy)) {
    require(std::isfinite(p->cap) && p->cap > 0.0, "step cap must be positive");
  } else {
    const auto& t = std::get<TheoreticalStep>(step_policy);
    require(t.constants.inner_grad_factor() == inner_grad_factor,
            "theoretical constants must use the same inner_grad_factor");
  }
}

std::uint64_t iterate_hash(const CoefVec& x) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : x.values()) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

CoefVec dual_step(const CoefVec& x, const DualVec& grad, double beta, const Exponent& e) {
  return duality_map_q(duality_map_p(x, e) - beta * grad, e);
}

CoefVec dual_step(const ProblemInstance& prob, double alpha, const CoefVec& x, double beta) {
  return dual_step(x, phi_gradient(prob, alpha, x), beta, prob.exponent());
}

double practical_step_size(double grad_norm, double cap) {
  if (!(grad_norm > 0.0)) {
    throw std::invalid_argument("practical_step_size: gradient norm must be positive");
  }
  return std::min(1.0 / grad_norm, cap);
}

double line_minimum(const ProblemInstance& prob, double alpha, const CoefVec& x,
                    const Evaluation& ev) {
  const Exponent& e = prob.exponent();
  const DualVec xi = duality_map_p(x, e);
  auto along = [&](double t) {
    return phi_value(prob, alpha, duality_map_q(xi - t * ev.gradient, e));
  };

  const double t_max = 10.0 / ev.grad_norm;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = t_max;
  double t1 = hi - inv_phi * (hi - lo);
  double t2 = lo + inv_phi * (hi - lo);
  double f1 = along(t1);
  double f2 = along(t2);
  double best = std::min(f1, f2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = t2;
      t2 = t1;
      f2 = f1;
      t1 = hi - inv_phi * (hi - lo);
      f1 = along(t1);
      best = std::min(best, f1);
    } else {
      lo = t1;
      t1 = t2;
      f1 = f2;
      t2 = lo + inv_phi * (hi - lo);
      f2 = along(t2);
      best = std::min(best, f2);
    }
  }
  // Non-unimodal profiles can leave the bracket above Phi(x); backtrack toward 0.
  for (double t = t_max; best >= ev.phi && t > t_max * 1e-30; t *= 0.5) {
    best = std::min(best, along(t));
  }
  return best;
}

double theoretical_step_size(const ProblemInstance& prob, double alpha, const CoefVec& x,
                             const Evaluation& ev, const theory::TheoryConstants& constants) {
  if (!(ev.grad_norm > 0.0)) {
    throw std::invalid_argument("theoretical_step_size: gradient norm must be positive");
  }
  const theory::AlphaConstants k = constants.at(alpha);
  const double gap = ev.phi - line_minimum(prob, alpha, x, ev);
  const double cbar = theory::c_bar_jk(constants.params(), alpha, gap);
  const double g2 = ev.grad_norm * ev.grad_norm;
  return std::min(constants.gamma() * cbar * alpha / g2, 1.0 / (2.0 * k.M));
}

double theoretical_step_size(const ProblemInstance& prob, double alpha, const CoefVec& x,
                             const theory::TheoryConstants& constants) {
  return theoretical_step_size(prob, alpha, x, evaluate(prob, alpha, x), constants);
}

double relative_error(const CoefVec& x, const CoefVec& x_true) {
  return l2_norm(x - x_true) / l2_norm(x_true);
}

namespace {

bool finite_eval(const Evaluation& ev) {
  if (!std::isfinite(ev.phi) || !std::isfinite(ev.grad_norm) || !std::isfinite(ev.residual)) {
    return false;
  }
  for (double g : ev.gradient.values()) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

bool finite_vec(const CoefVec& x) {
  for (double v : x.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

TraceRecord make_record(std::size_t j, std::size_t k, double alpha, double beta,
                        const Evaluation& ev, const CoefVec& x) {
  return {j, k, alpha, beta, ev.phi, ev.grad_norm, ev.residual, iterate_hash(x)};
}

}  // namespace

SolverResult dtigra_solve(const ProblemInstance& prob, const CoefVec& x0, const DtigraConfig& cfg,
                          const std::optional<CoefVec>& x_true) {
  cfg.validate();
  require_same_size(x0.size(), prob.size(), "dtigra_solve start vector");
  if (!(prob.delta() > 0.0)) {
    throw std::invalid_argument("dtigra_solve: discrepancy stopping requires delta > 0");
  }

  const Exponent& e = prob.exponent();
  const double threshold = cfg.tau * prob.delta();

  SolverResult res;
  SolverTrace& trace = res.trace;
  CoefVec x = x0;
  double alpha = cfg.alpha0;

  for (std::size_t j = 0;; ++j) {
    const double C = cfg.inner_grad_factor * alpha;
    Evaluation ev;
    for (std::size_t k = 0;; ++k) {
      ev = evaluate(prob, alpha, x);
      if (!finite_eval(ev)) {
        trace.records.push_back(make_record(j, k, alpha, 0.0, ev, x));
        throw NumericalBreakdown("dtigra_solve: non-finite value at j=" + std::to_string(j) +
                                     ", k=" + std::to_string(k),
                                 trace);
      }
      if (ev.grad_norm <= C || k >= cfg.inner_max_iters || ev.grad_norm == 0.0) {
        trace.records.push_back(make_record(j, k, alpha, 0.0, ev, x));
        break;
      }
      const double beta = std::visit(
          [&](const auto& policy) -> double {
            using P = std::decay_t<decltype(policy)>;
            if constexpr (std::is_same_v<P, PracticalStep>) {
              return practical_step_size(ev.grad_norm, policy.cap);
            } else {
              return theoretical_step_size(prob, alpha, x, ev, policy.constants);
            }
          },
          cfg.step_policy);
      trace.records.push_back(make_record(j, k, alpha, beta, ev, x));
      x = dual_step(x, ev.gradient, beta, e);
      ++res.k_star;
      if (!finite_vec(x)) {
        throw NumericalBreakdown("dtigra_solve: non-finite iterate after j=" +
                                     std::to_string(j) + ", k=" + std::to_string(k),
                                 trace);
      }
    }

    res.j_star = j;
    res.alpha_final = alpha;
    res.final_residual = ev.residual;
    if (ev.residual <= threshold) {
      trace.stop_reason = StopReason::Discrepancy;
      break;
    }
    if (j + 1 >= cfg.outer_max_iters) {
      trace.stop_reason = StopReason::OuterCap;
      break;
    }
    const double next = cfg.qbar * alpha;
    if (next < cfg.alpha_floor) {
      trace.stop_reason = StopReason::AlphaFloor;
      break;
    }
    alpha = next;
  }

  res.x_final = std::move(x);
  if (x_true) res.relative_error = relative_error(res.x_final, *x_true);
  return res;
}

double landweber_alpha(std::size_t k, double start_norm) {
  return start_norm / (2.0 * std::pow(static_cast<double>(k) + 1000.0, 0.99));
}

SolverResult landweber_solve(const ProblemInstance& prob, const CoefVec& x0,
                             const LandweberConfig& cfg, const std::optional<CoefVec>& x_true) {
  require_same_size(x0.size(), prob.size(), "landweber_solve start vector");
  if (!(cfg.tau > 1.0)) throw std::invalid_argument("landweber_solve: tau must exceed 1");
  if (!(cfg.beta_cap > 0.0)) throw std::invalid_argument("landweber_solve: beta_cap must be > 0");

  const Exponent& e = prob.exponent();
  const double start_norm = lp_norm(x0, e);
  if (start_norm == 0.0) throw std::invalid_argument("landweber_solve: x0 must be nonzero");
  const double threshold = cfg.tau * prob.delta();

  SolverResult res;
  SolverTrace& trace = res.trace;
  CoefVec x = x0;
  for (std::size_t k = 0;; ++k) {
    const double alpha = landweber_alpha(k, start_norm);
    const Evaluation ev = evaluate(prob, alpha, x);
    res.alpha_final = alpha;
    res.final_residual = ev.residual;
    res.k_star = k;
    if (!finite_eval(ev)) {
      trace.records.push_back(make_record(0, k, alpha, 0.0, ev, x));
      throw NumericalBreakdown("landweber_solve: non-finite value at k=" + std::to_string(k),
                               trace);
    }
    if (ev.residual <= threshold) {
      trace.records.push_back(make_record(0, k, alpha, 0.0, ev, x));
      trace.stop_reason = StopReason::Discrepancy;
      break;
    }
    if (k >= cfg.max_iters) {
      trace.records.push_back(make_record(0, k, alpha, 0.0, ev, x));
      trace.stop_reason = StopReason::OuterCap;
      break;
    }
    if (ev.grad_norm == 0.0) {
      trace.records.push_back(make_record(0, k, alpha, 0.0, ev, x));
      trace.stop_reason = StopReason::Stalled;
      break;
    }
    const double beta = practical_step_size(ev.grad_norm, cfg.beta_cap);
    trace.records.push_back(make_record(0, k, alpha, beta, ev, x));
    x = dual_step(x, ev.gradient, beta, e);
    if (!finite_vec(x)) {
      throw NumericalBreakdown("landweber_solve: non-finite iterate after k=" + std::to_string(k),
                               trace);
    }
  }

  res.x_final = std::move(x);
  if (x_true) res.relative_error = relative_error(res.x_final, *x_true);
  return res;
}

CoefVec random_start(std::size_t n, double target_norm, const Exponent& e, std::uint64_t seed) {
  if (!(target_norm >= 0.0) || !std::isfinite(target_norm)) {
    throw std::invalid_argument("random_start: target_norm must be finite and >= 0");
  }
  CoefVec x(n);
  if (target_norm == 0.0 || n == 0) return x;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : x.values()) v = normal(gen);
  const double scale = target_norm / lp_norm(x, e);
  for (double& v : x.values()) v *= scale;
  return x;
}

}  // namespace dtigra
