#ifndef MAXREG_TIMEGRID_HPP
#define MAXREG_TIMEGRID_HPP

#include "maxreg/symbols.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace maxreg {

/// Geometric nodes t_1 < ... < t_N on [t_min, t_max] with trapezoidal weights in ln t.
/// weights()[k] is the weight for dt, so sum_k w_k g(t_k) approximates the integral of g
/// over [t_min, t_max]; in the interior w_k = t_k * log_step.
class TimeGrid {
 public:
  static TimeGrid log_uniform(double t_min, double t_max, int n) {
    if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max))
      throw std::invalid_argument("make_log_grid: need 0 < t_min < t_max");
    if (n < 2) throw std::invalid_argument("make_log_grid: need at least 2 nodes");
    TimeGrid g;
    g.log_step_ = std::log(t_max / t_min) / (n - 1);
    g.nodes_.resize(n);
    g.weights_.resize(n);
    const double l0 = std::log(t_min);
    for (int k = 0; k < n; ++k) g.nodes_[k] = std::exp(l0 + k * g.log_step_);
    g.nodes_.front() = t_min;
    g.nodes_.back() = t_max;
    for (int k = 0; k < n; ++k) g.weights_[k] = g.nodes_[k] * g.log_step_;
    g.weights_.front() *= 0.5;
    g.weights_.back() *= 0.5;
    return g;
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  double t_min() const { return nodes_.front(); }
  double t_max() const { return nodes_.back(); }
  double log_step() const { return log_step_; }
  double node(int k) const { return nodes_[k]; }
  double weight(int k) const { return weights_[k]; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Same log step, `extra` more nodes below t_min.
  TimeGrid extended_below(int extra) const {
    if (extra < 0) throw std::invalid_argument("extended_below: negative node count");
    return log_uniform(t_min() * std::exp(-extra * log_step_), t_max(), size() + extra);
  }

  /// Nodes scaled by c > 0.
  TimeGrid dilated(double c) const { return log_uniform(c * t_min(), c * t_max(), size()); }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.nodes_ == b.nodes_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double log_step_ = 0.0;
};

inline TimeGrid make_log_grid(double t_min, double t_max, int n) { return TimeGrid::log_uniform(t_min, t_max, n); }

/// [1e-4 t_ref, 1e4 t_ref] with t_ref the reciprocal of the smallest real part in the spectrum.
inline TimeGrid default_grid(const SectorialOperator& a, int n = 2000) {
  const double t_ref = 1.0 / a.min_real_eigenvalue();
  return make_log_grid(1e-4 * t_ref, 1e4 * t_ref, n);
}

/// The alpha of the weighted space L^2(R+, t^alpha dt; H).
struct WeightExponent {
  double value = 0.0;
  /// Outside the range |alpha| <= 1 covered by the weighted estimates.
  bool flagged() const { return std::abs(value) > 1.0; }
};

/// H-valued samples on a TimeGrid, stored column-per-node.
class GridFunction {
 public:
  GridFunction(TimeGrid grid, int dim) : grid_(std::move(grid)), values_(Matrix::Zero(dim, grid_.size())) {
    if (dim < 1) throw std::invalid_argument("GridFunction: dimension must be >= 1");
  }
  GridFunction(TimeGrid grid, Matrix values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.cols() != grid_.size() || values_.rows() < 1)
      throw std::invalid_argument("GridFunction: one column per grid node required");
  }

  const TimeGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  int dim() const { return static_cast<int>(values_.rows()); }
  const Matrix& values() const { return values_; }
  Matrix& values() { return values_; }
  auto value(int k) const { return values_.col(k); }
  auto value(int k) { return values_.col(k); }

  GridFunction& operator+=(const GridFunction& o) {
    check_compatible(o);
    values_ += o.values_;
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    check_compatible(o);
    values_ -= o.values_;
    return *this;
  }
  GridFunction& operator*=(Complex c) {
    values_ *= c;
    return *this;
  }
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(Complex c, GridFunction a) { return a *= c; }

 private:
  void check_compatible(const GridFunction& o) const {
    if (o.dim() != dim() || !(o.grid_ == grid_)) throw std::invalid_argument("GridFunction: incompatible operands");
  }

  TimeGrid grid_;
  Matrix values_;
};

using TimeFunction = std::function<HVector(double)>;

inline GridFunction sample(const TimeGrid& grid, int dim, const TimeFunction& f) {
  GridFunction g(grid, dim);
  for (int k = 0; k < grid.size(); ++k) {
    HVector v = f(grid.node(k));
    if (v.size() != dim) throw std::invalid_argument("sample: dimension mismatch");
    g.value(k) = v;
  }
  return g;
}

/// sqrt(sum_k w_k t_k^alpha |f(t_k)|^2), the discrete norm of L^2(R+, t^alpha dt; H)
/// restricted to [t_min, t_max].
inline double weighted_norm(const GridFunction& f, WeightExponent alpha) {
  const auto& g = f.grid();
  double acc = 0.0;
  for (int k = 0; k < g.size(); ++k) acc += g.weight(k) * std::pow(g.node(k), alpha.value) * f.value(k).squaredNorm();
  return std::sqrt(acc);
}

/// sum_k w_k t_k^alpha <f(t_k), g(t_k)>, conjugate-linear in f.
inline Complex pairing(const GridFunction& f, const GridFunction& g, WeightExponent alpha = {}) {
  if (f.dim() != g.dim() || !(f.grid() == g.grid())) throw std::invalid_argument("pairing: incompatible operands");
  const auto& grid = f.grid();
  Complex acc = 0.0;
  for (int k = 0; k < grid.size(); ++k)
    acc += grid.weight(k) * std::pow(grid.node(k), alpha.value) * f.value(k).dot(g.value(k));
  return acc;
}

/// Value at t_k is symbol(t_k, A) h.
inline GridFunction sample_symbol(Symbol s, const SectorialOperator& a, int n, const HVector& h, const TimeGrid& grid) {
  require_symbol_param(n);
  detail::require_dim(a, h.size(), "sample_symbol");
  GridFunction g(grid, a.dim());
  for (int k = 0; k < grid.size(); ++k) g.value(k) = apply_symbol(s, a, n, grid.node(k), h);
  return g;
}

}  // namespace maxreg

#endif  // MAXREG_TIMEGRID_HPP
