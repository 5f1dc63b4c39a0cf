#include "dtigra/signal.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dtigra/seqspace.hpp"

namespace dtigra {

Signal::Signal(std::size_t n) : s_(n, 0.0) {}

Signal::Signal(std::vector<double> samples) : s_(std::move(samples)) {
  for (double v : s_) {
    if (!std::isfinite(v)) throw std::invalid_argument("signal samples must be finite");
  }
}

Signal operator+(const Signal& a, const Signal& b) {
  require_same_size(a.grid_size(), b.grid_size(), "signal addition");
  Signal out(a.grid_size());
  for (std::size_t i = 0; i < a.grid_size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Signal operator-(const Signal& a, const Signal& b) {
  require_same_size(a.grid_size(), b.grid_size(), "signal subtraction");
  Signal out(a.grid_size());
  for (std::size_t i = 0; i < a.grid_size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Signal operator*(double s, const Signal& a) {
  Signal out(a.grid_size());
  for (std::size_t i = 0; i < a.grid_size(); ++i) out[i] = s * a[i];
  return out;
}

double l2_inner(const Signal& u, const Signal& v) {
  require_same_size(u.grid_size(), v.grid_size(), "l2_inner");
  if (u.grid_size() == 0) return 0.0;
  return dot(u.samples(), v.samples()) / static_cast<double>(u.grid_size());
}

double l2_norm(const Signal& u) { return std::sqrt(l2_inner(u, u)); }

NoisyData add_noise(const Signal& y, const NoiseSpec& spec) {
  if (!(spec.relative_level > 0.0 && spec.relative_level < 1.0)) {
    throw std::invalid_argument("noise relative_level must lie in (0, 1)");
  }
  const double ynorm = l2_norm(y);
  if (ynorm == 0.0) throw std::invalid_argument("add_noise: zero signal has no relative noise level");

  std::mt19937_64 gen(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Signal e(y.grid_size());
  for (double& v : e.samples()) v = normal(gen);

  const double delta = spec.relative_level * ynorm;
  const double enorm = l2_norm(e);
  return {y + (delta / enorm) * e, delta};
}

}  // namespace dtigra
