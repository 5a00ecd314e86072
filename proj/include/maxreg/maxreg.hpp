#ifndef MAXREG_MAXREG_HPP
#define MAXREG_MAXREG_HPP

#include "maxreg/timegrid.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace maxreg {

enum class Method { direct, fast };

inline const char* to_string(Method m) { return m == Method::direct ? "direct" : "fast"; }

/// Discrete M+(f) or M-(f) on the nodes of f's grid.
struct MaxRegResult {
  GridFunction values;
  Method method;
  /// (node, cell) pairs whose cell touches the kernel singularity s = t_k.
  int singular_cells_handled = 0;
  /// Estimate of the dropped (t_max, inf) contribution; zero for M+.
  double tail_bound = 0.0;
};

namespace detail {

// Functions of A in the eigenbasis: every operator is a diagonal vector.
struct DiagonalAlgebra {
  Vector lambda;

  Vector semigroup(double t) const { return (-t * lambda).array().exp(); }
  Vector local_kernel(double dt) const {
    return lambda.unaryExpr([dt](Complex l) { return one_minus_exp(dt * l); });
  }
  // A^{-1}(I - e^{-dt A})
  Vector resolvent_kernel(double dt) const {
    return lambda.unaryExpr([dt](Complex l) { return one_minus_exp(dt * l) / l; });
  }
  template <class X>
  static Vector apply(const Vector& op, const X& x) { return op.cwiseProduct(x); }
  template <class X>
  static Vector apply_adjoint(const Vector& op, const X& x) { return op.conjugate().cwiseProduct(x); }
};

// Functions of A as dense matrices, through expm.
struct DenseAlgebra {
  Matrix a;

  Matrix semigroup(double t) const {
    return t == 0.0 ? Matrix(Matrix::Identity(a.rows(), a.cols())) : expm(Matrix(-t * a));
  }
  Matrix local_kernel(double dt) const { return one_minus_expm(Matrix(dt * a)); }
  Matrix resolvent_kernel(double dt) const { return a.partialPivLu().solve(local_kernel(dt)); }
  template <class X>
  static Vector apply(const Matrix& op, const X& x) { return op * x; }
  template <class X>
  static Vector apply_adjoint(const Matrix& op, const X& x) { return op.adjoint() * x; }
};

inline Vector cell_average(const Matrix& c, int j) { return 0.5 * (c.col(j) + c.col(j + 1)); }

// S_0 = P(t_1) c_1, S_{k+1} = E(dt_k) S_k + P(dt_k) cbar_k. P is the local kernel by
// default; the resolvent kernel gives the Duhamel state instead of A times it.
template <class Alg, class KernelFn>
Matrix forward_recursion(const Alg& alg, const TimeGrid& g, const Matrix& c, KernelFn kernel) {
  const int n = g.size();
  Matrix s(c.rows(), n);
  s.col(0) = Alg::apply(kernel(g.node(0)), c.col(0));
  for (int k = 0; k + 1 < n; ++k) {
    const double dt = g.node(k + 1) - g.node(k);
    s.col(k + 1) = Alg::apply(alg.semigroup(dt), s.col(k)) + Alg::apply(kernel(dt), cell_average(c, k));
  }
  return s;
}

// S_{N} = 0, S_k = E(dt_k) S_{k+1} + P(dt_k) cbar_k.
template <class Alg, class KernelFn>
Matrix backward_recursion(const Alg& alg, const TimeGrid& g, const Matrix& c, KernelFn kernel) {
  const int n = g.size();
  Matrix s = Matrix::Zero(c.rows(), n);
  for (int k = n - 2; k >= 0; --k) {
    const double dt = g.node(k + 1) - g.node(k);
    s.col(k) = Alg::apply(alg.semigroup(dt), s.col(k + 1)) + Alg::apply(kernel(dt), cell_average(c, k));
  }
  return s;
}

template <class Alg>
Matrix forward_direct(const Alg& alg, const TimeGrid& g, const Matrix& c) {
  const int n = g.size();
  const Vector lead = Alg::apply(alg.local_kernel(g.node(0)), c.col(0));
  Matrix cells(c.rows(), std::max(n - 1, 0));
  for (int j = 0; j + 1 < n; ++j) cells.col(j) = Alg::apply(alg.local_kernel(g.node(j + 1) - g.node(j)), cell_average(c, j));
  Matrix s(c.rows(), n);
  for (int k = 0; k < n; ++k) {
    const double tk = g.node(k);
    Vector acc = Alg::apply(alg.semigroup(tk - g.node(0)), lead);
    for (int j = 0; j < k; ++j) acc += Alg::apply(alg.semigroup(tk - g.node(j + 1)), cells.col(j));
    s.col(k) = acc;
  }
  return s;
}

template <class Alg>
Matrix backward_direct(const Alg& alg, const TimeGrid& g, const Matrix& c) {
  const int n = g.size();
  Matrix cells(c.rows(), std::max(n - 1, 0));
  for (int j = 0; j + 1 < n; ++j) cells.col(j) = Alg::apply(alg.local_kernel(g.node(j + 1) - g.node(j)), cell_average(c, j));
  Matrix s = Matrix::Zero(c.rows(), n);
  for (int k = 0; k + 1 < n; ++k) {
    const double tk = g.node(k);
    Vector acc = Vector::Zero(c.rows());
    for (int j = k; j + 1 < n; ++j) acc += Alg::apply(alg.semigroup(g.node(j) - tk), cells.col(j));
    s.col(k) = acc;
  }
  return s;
}

// Conjugate transpose of forward_recursion with the local kernel, as a linear map on d x N arrays.
template <class Alg>
Matrix forward_recursion_adjoint(const Alg& alg, const TimeGrid& g, const Matrix& y) {
  const int n = g.size();
  Matrix sigma(y.rows(), n);
  sigma.col(n - 1) = y.col(n - 1);
  for (int k = n - 2; k >= 0; --k)
    sigma.col(k) = y.col(k) + Alg::apply_adjoint(alg.semigroup(g.node(k + 1) - g.node(k)), sigma.col(k + 1));
  Matrix z = Matrix::Zero(y.rows(), n);
  z.col(0) = Alg::apply_adjoint(alg.local_kernel(g.node(0)), sigma.col(0));
  for (int k = 0; k + 1 < n; ++k) {
    const Vector u = 0.5 * Alg::apply_adjoint(alg.local_kernel(g.node(k + 1) - g.node(k)), sigma.col(k + 1));
    z.col(k) += u;
    z.col(k + 1) += u;
  }
  return z;
}

// Conjugate transpose of backward_recursion with the local kernel.
template <class Alg>
Matrix backward_recursion_adjoint(const Alg& alg, const TimeGrid& g, const Matrix& y) {
  const int n = g.size();
  Matrix sigma(y.rows(), n);
  sigma.col(0) = y.col(0);
  for (int k = 0; k + 1 < n; ++k)
    sigma.col(k + 1) = y.col(k + 1) + Alg::apply_adjoint(alg.semigroup(g.node(k + 1) - g.node(k)), sigma.col(k));
  Matrix z = Matrix::Zero(y.rows(), n);
  for (int k = 0; k + 1 < n; ++k) {
    const Vector u = 0.5 * Alg::apply_adjoint(alg.local_kernel(g.node(k + 1) - g.node(k)), sigma.col(k));
    z.col(k) += u;
    z.col(k + 1) += u;
  }
  return z;
}

// Runs body(algebra, coefficients) in the eigenbasis when one is cached, else densely.
// With `adjoint` the basis change is the one of the conjugate-transposed operator.
template <class Body>
GridFunction in_coordinates(const SectorialOperator& a, const GridFunction& f, Body&& body, bool adjoint = false) {
  require_dim(a, f.dim(), "maximal regularity operator");
  if (a.spectral()) {
    const auto& sd = *a.spectral();
    const DiagonalAlgebra alg{sd.values};
    const Matrix c = (adjoint ? Matrix(sd.vectors.adjoint()) : sd.inverse) * f.values();
    const Matrix s = body(alg, c);
    return GridFunction(f.grid(), Matrix((adjoint ? Matrix(sd.inverse.adjoint()) : sd.vectors) * s));
  }
  const DenseAlgebra alg{a.matrix()};
  return GridFunction(f.grid(), Matrix(body(alg, f.values())));
}

inline double basis_condition(const SectorialOperator& a) {
  return a.spectral() ? condition_number(a.spectral()->vectors) : 1.0;
}

inline void scale_columns(Matrix& m, const TimeGrid& g, WeightExponent alpha, bool inverse) {
  for (int k = 0; k < g.size(); ++k) {
    const double w = g.weight(k) * std::pow(g.node(k), alpha.value);
    m.col(k) *= inverse ? 1.0 / w : w;
  }
}

}  // namespace detail

/// M+(f)(t_k) = int_0^{t_k} A e^{-(t_k-s)A} f(s) ds with f piecewise constant per cell
/// (value (f_j + f_{j+1})/2) and each cell integrated exactly, O(N^2) kernel applications.
/// The leading cell (0, t_1) uses f(t_1).
inline MaxRegResult mplus_direct(const SectorialOperator& a, const GridFunction& f) {
  auto v = detail::in_coordinates(a, f, [&](const auto& alg, const Matrix& c) {
    return detail::forward_direct(alg, f.grid(), c);
  });
  return {std::move(v), Method::direct, f.size(), 0.0};
}

/// Same discretization as mplus_direct, evaluated by the exponential recursion
/// S_{k+1} = e^{-dt_k A} S_k + (I - e^{-dt_k A}) fbar_k in O(N).
inline MaxRegResult mplus_fast(const SectorialOperator& a, const GridFunction& f) {
  auto v = detail::in_coordinates(a, f, [&](const auto& alg, const Matrix& c) {
    return detail::forward_recursion(alg, f.grid(), c, [&](double dt) { return alg.local_kernel(dt); });
  });
  return {std::move(v), Method::fast, f.size(), 0.0};
}

namespace detail {
inline double mminus_tail(const SectorialOperator& a, const GridFunction& f) {
  return basis_condition(a) * f.value(f.size() - 1).norm();
}
}  // namespace detail

/// M-(f)(t_k) = int_{t_k}^inf A e^{-(s-t_k)A} f(s) ds on the anticausal cells; the tail
/// beyond t_max is dropped and bounded in tail_bound.
inline MaxRegResult mminus_direct(const SectorialOperator& a, const GridFunction& f) {
  auto v = detail::in_coordinates(a, f, [&](const auto& alg, const Matrix& c) {
    return detail::backward_direct(alg, f.grid(), c);
  });
  return {std::move(v), Method::direct, f.size() - 1, detail::mminus_tail(a, f)};
}

inline MaxRegResult mminus_fast(const SectorialOperator& a, const GridFunction& f) {
  auto v = detail::in_coordinates(a, f, [&](const auto& alg, const Matrix& c) {
    return detail::backward_recursion(alg, f.grid(), c, [&](double dt) { return alg.local_kernel(dt); });
  });
  return {std::move(v), Method::fast, f.size() - 1, detail::mminus_tail(a, f)};
}

/// Adjoint of the discrete M+ in L^2(R+, t^alpha dt; H) for the grid pairing. The kernels
/// are those of A*, so for alpha = 0 this is the discrete M- of A* induced by duality.
inline GridFunction mplus_adjoint(const SectorialOperator& a, const GridFunction& g, WeightExponent alpha = {}) {
  GridFunction y = g;
  detail::scale_columns(y.values(), g.grid(), alpha, false);
  GridFunction z = detail::in_coordinates(
      a, y, [&](const auto& alg, const Matrix& c) { return detail::forward_recursion_adjoint(alg, g.grid(), c); },
      true);
  detail::scale_columns(z.values(), g.grid(), alpha, true);
  return z;
}

/// Adjoint of the discrete M- in L^2(R+, t^alpha dt; H).
inline GridFunction mminus_adjoint(const SectorialOperator& a, const GridFunction& g, WeightExponent alpha = {}) {
  GridFunction y = g;
  detail::scale_columns(y.values(), g.grid(), alpha, false);
  GridFunction z = detail::in_coordinates(
      a, y, [&](const auto& alg, const Matrix& c) { return detail::backward_recursion_adjoint(alg, g.grid(), c); },
      true);
  detail::scale_columns(z.values(), g.grid(), alpha, true);
  return z;
}

/// u solving u' + Au = f, u(0) = 0, by the same cells; A u_k reproduces M+(f)(t_k).
inline GridFunction evolve_forward(const SectorialOperator& a, const GridFunction& f) {
  return detail::in_coordinates(a, f, [&](const auto& alg, const Matrix& c) {
    return detail::forward_recursion(alg, f.grid(), c, [&](double dt) { return alg.resolvent_kernel(dt); });
  });
}

/// v solving v' - Av = f, v(inf) = 0; A v_k reproduces -M-(f)(t_k).
inline GridFunction evolve_backward(const SectorialOperator& a, const GridFunction& f) {
  auto v = detail::in_coordinates(a, f, [&](const auto& alg, const Matrix& c) {
    return detail::backward_recursion(alg, f.grid(), c, [&](double dt) { return alg.resolvent_kernel(dt); });
  });
  v *= -1.0;
  return v;
}

enum class MaxRegOperator { plus, minus };

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Estimate after each iteration; nondecreasing.
  std::vector<double> history;
};

/// Power iteration on T^dagger T with T the discrete M+ or M- and the adjoint taken in
/// L^2(R+, t^alpha dt; H). Returns the estimated operator norm on that space. converged is
/// false when the last two estimates differ by more than 1e-4 relative.
inline NormEstimate operator_norm_estimate(MaxRegOperator which, const SectorialOperator& a, WeightExponent alpha,
                                           const TimeGrid& grid, int iterations, std::uint64_t seed = 0x5eed) {
  if (iterations < 10) throw std::invalid_argument("operator_norm_estimate: need at least 10 iterations");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  GridFunction x(grid, a.dim());
  for (int k = 0; k < grid.size(); ++k)
    for (int i = 0; i < a.dim(); ++i) x.value(k)(i) = Complex(normal(rng), normal(rng));
  x *= 1.0 / weighted_norm(x, alpha);

  NormEstimate out;
  for (int it = 0; it < iterations; ++it) {
    const GridFunction y = which == MaxRegOperator::plus ? mplus_fast(a, x).values : mminus_fast(a, x).values;
    const double est = weighted_norm(y, alpha);
    out.history.push_back(est);
    out.iterations = it + 1;
    x = which == MaxRegOperator::plus ? mplus_adjoint(a, y, alpha) : mminus_adjoint(a, y, alpha);
    const double nx = weighted_norm(x, alpha);
    if (!(nx > 0.0)) break;
    x *= 1.0 / nx;
  }
  out.value = out.history.empty() ? 0.0 : out.history.back();
  for (double h : out.history) out.value = std::max(out.value, h);
  const auto n = out.history.size();
  out.converged = n >= 2 && std::abs(out.history[n - 1] - out.history[n - 2]) <= 1e-4 * out.history[n - 1];
  return out;
}

}  // namespace maxreg

#endif  // MAXREG_MAXREG_HPP
