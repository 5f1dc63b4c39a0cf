#pragma once

// Functions on [0,1] sampled at the midpoints t_i = (i - 1/2)/n, i = 1..n.
// The inner product is the midpoint rule (1/n) sum u_i v_i.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dtigra {

class Signal {
 public:
  Signal() = default;
  /// Zero signal on n grid points.
  explicit Signal(std::size_t n);
  explicit Signal(std::vector<double> samples);

  /// Samples g(t_i) of a callable g on the midpoint grid.
  template <class F>
  static Signal sample(std::size_t n, F&& g) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g(grid_point(i, n));
    return Signal(std::move(v));
  }

  /// Midpoint t_i for 0-based index i.
  static double grid_point(std::size_t i, std::size_t n) {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }

  std::size_t grid_size() const { return s_.size(); }
  double operator[](std::size_t i) const { return s_[i]; }
  double& operator[](std::size_t i) { return s_[i]; }
  std::span<const double> samples() const { return s_; }
  std::span<double> samples() { return s_; }

  bool operator==(const Signal&) const = default;

 private:
  std::vector<double> s_;
};

Signal operator+(const Signal& a, const Signal& b);
Signal operator-(const Signal& a, const Signal& b);
Signal operator*(double s, const Signal& a);

double l2_inner(const Signal& u, const Signal& v);
double l2_norm(const Signal& u);

struct NoiseSpec {
  double relative_level = 0.01;
  std::uint64_t seed = 42;
};

struct NoisyData {
  Signal data;   // y^delta
  double delta;  // ||y - y^delta||
};

/// Name of the generator behind add_noise / random_start, recorded in output metadata.
inline constexpr const char* kNoiseGenerator = "mt19937_64+std::normal_distribution";

/// y^delta = y + delta * e / ||e|| with e i.i.d. standard normal from the seeded
/// generator and delta = relative_level * ||y||. Throws on a zero signal.
NoisyData add_noise(const Signal& y, const NoiseSpec& spec);

}  // namespace dtigra
