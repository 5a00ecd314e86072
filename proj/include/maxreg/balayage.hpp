#ifndef MAXREG_BALAYAGE_HPP
#define MAXREG_BALAYAGE_HPP

#include "maxreg/timegrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace maxreg {

struct SweepResult {
  HVector value;
  /// Part of value contributed by the closure on (0, t_1).
  double head_closure = 0.0;
  /// Rough size of the dropped (t_max, inf) part: |K f|(t_max) t_max.
  double tail_bound = 0.0;
};

namespace detail {

// int_0^{t_1} g dt from the linear-in-t model through g(t_1) and g(t_m), t_m ~ 2 t_1.
// Linear in g and exact for g(t) = a + b t.
inline HVector head_closure(const TimeGrid& grid, const Matrix& g) {
  const int n = grid.size();
  const int m = std::clamp(static_cast<int>(std::lround(std::log(2.0) / grid.log_step())), 1, n - 1);
  const double t0 = grid.node(0);
  const double r = grid.node(m) / t0;
  return t0 * (g.col(0) - (g.col(m) - g.col(0)) / (2.0 * (r - 1.0)));
}

}  // namespace detail

/// Balayage: sum_k w_k K(t_k, A) f(t_k) plus the head closure, approximating the
/// integral of K(t, A) f(t) over (0, inf).
inline SweepResult sweep(const SectorialOperator& a, SweepKernel kernel, int n, const GridFunction& f) {
  require_symbol_param(n);
  detail::require_dim(a, f.dim(), "sweep");
  const auto& grid = f.grid();
  Matrix g(f.dim(), grid.size());
  for (int k = 0; k < grid.size(); ++k) g.col(k) = apply_symbol(kernel, a, n, grid.node(k), f.value(k));
  HVector sum = HVector::Zero(f.dim());
  for (int k = 0; k < grid.size(); ++k) sum += grid.weight(k) * g.col(k);
  const HVector head = detail::head_closure(grid, g);
  SweepResult out;
  out.value = sum + head;
  out.head_closure = head.norm();
  out.tail_bound = g.col(grid.size() - 1).norm() * grid.t_max();
  return out;
}

/// f(s) = sA e^{-sA} h - (9/4) sA e^{-2sA} h. Per eigencomponent the two terms sweep
/// against A e^{-sA} to 1/4 and (9/4)(1/9), so the balayage of f vanishes.
inline TimeFunction zero_balayage_function(const SectorialOperator& a, const HVector& h) {
  detail::require_dim(a, h.size(), "zero_balayage_input");
  return [a, h](double s) -> HVector {
    return s * (apply_symbol(Symbol::A_exp_N, a, 1, s, h) - 2.25 * apply_symbol(Symbol::A_exp_N, a, 2, s, h));
  };
}

inline GridFunction zero_balayage_input(const SectorialOperator& a, const HVector& h, const TimeGrid& grid) {
  return sample(grid, a.dim(), zero_balayage_function(a, h));
}

struct WeakConvergenceResult {
  bool converged = false;
  HVector value;
  /// Decade increments |int over decade| at the lower end (outer, inner) and upper end (inner, outer).
  std::array<double, 4> increments{};
};

/// Cauchy test for int_0^inf e^{-NsA} f(s) ds at both ends of the grid. An end passes when
/// its outermost decade contributes <= 1e-6 (|I| + 1), or at most half of the next decade
/// (geometric decay of the truncated integrals). In finite dimension weak and norm
/// convergence coincide.
inline WeakConvergenceResult weak_convergence_check(const SectorialOperator& a, const GridFunction& f, int n = 1) {
  const auto& grid = f.grid();
  const SweepResult full = sweep(a, Symbol::exp_N, n, f);
  Matrix g(f.dim(), grid.size());
  for (int k = 0; k < grid.size(); ++k) g.col(k) = grid.weight(k) * apply_symbol(Symbol::exp_N, a, n, grid.node(k), f.value(k));

  const double span = std::log10(grid.t_max() / grid.t_min());
  const double width = std::min(1.0, span / 4.0);
  auto band = [&](double lo, double hi) {
    HVector s = HVector::Zero(f.dim());
    for (int k = 0; k < grid.size(); ++k) {
      const double t = grid.node(k);
      if (t >= lo && t < hi) s += g.col(k);
    }
    return s.norm();
  };
  const double w = std::pow(10.0, width);
  const double eps = 1e-12;
  WeakConvergenceResult out;
  out.value = full.value;
  out.increments = {band(grid.t_min() * (1 - eps), grid.t_min() * w), band(grid.t_min() * w, grid.t_min() * w * w),
                    band(grid.t_max() / (w * w), grid.t_max() / w), band(grid.t_max() / w, grid.t_max() * (1 + eps))};
  const double tol = 1e-6 * (out.value.norm() + 1.0);
  auto end_ok = [tol](double outer, double inner) { return outer <= tol || outer <= 0.5 * inner; };
  out.converged = end_ok(out.increments[0], out.increments[1]) && end_ok(out.increments[3], out.increments[2]);
  return out;
}

}  // namespace maxreg

#endif  // MAXREG_BALAYAGE_HPP
