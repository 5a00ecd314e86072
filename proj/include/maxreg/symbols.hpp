#ifndef MAXREG_SYMBOLS_HPP
#define MAXREG_SYMBOLS_HPP

#include "maxreg/operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace maxreg {

/// Holomorphic functions of (t, A) used as square-function symbols, as inputs of the
/// evolution formulae and as balayage kernels. N is the integer parameter.
///   psi1         (tA)^N e^{-tA}
///   psi2         e^{-tA} (I - e^{-NtA})
///   A_exp_N      A e^{-NtA}
///   exp_N        e^{-NtA}
///   t_pow_A_pow  t^{N-1} A^N e^{-tA}
enum class Symbol { psi1, psi2, A_exp_N, exp_N, t_pow_A_pow };

/// The balayage kernel menu is the same family.
using SweepKernel = Symbol;

inline const char* to_string(Symbol s) {
  switch (s) {
    case Symbol::psi1: return "psi1";
    case Symbol::psi2: return "psi2";
    case Symbol::A_exp_N: return "A_exp_N";
    case Symbol::exp_N: return "exp_N";
    case Symbol::t_pow_A_pow: return "t_pow_A_pow";
  }
  return "?";
}

inline Symbol parse_symbol(std::string_view name) {
  if (name == "psi1") return Symbol::psi1;
  if (name == "psi2") return Symbol::psi2;
  if (name == "A_exp_N") return Symbol::A_exp_N;
  if (name == "exp_N") return Symbol::exp_N;
  if (name == "t_pow_A_pow") return Symbol::t_pow_A_pow;
  throw std::invalid_argument("unknown symbol tag: " + std::string(name));
}

inline void require_symbol_param(int n) {
  if (n < 1) throw std::invalid_argument("symbol parameter N must be >= 1");
}

/// Scalar value of the symbol at eigenvalue lambda.
inline Complex symbol_scalar(Symbol s, int n, double t, Complex lambda) {
  const Complex z = t * lambda;
  switch (s) {
    case Symbol::psi1: return std::pow(z, n) * std::exp(-z);
    case Symbol::psi2: return std::exp(-z) * one_minus_exp(static_cast<double>(n) * z);
    case Symbol::A_exp_N: return lambda * std::exp(-static_cast<double>(n) * z);
    case Symbol::exp_N: return std::exp(-static_cast<double>(n) * z);
    case Symbol::t_pow_A_pow: return std::pow(t, n - 1) * std::pow(lambda, n) * std::exp(-z);
  }
  throw std::invalid_argument("unknown symbol");
}

namespace detail {

inline Matrix matrix_power(const Matrix& a, int n) {
  Matrix r = Matrix::Identity(a.rows(), a.cols());
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

inline Matrix symbol_matrix_dense(Symbol s, const Matrix& a, int n, double t) {
  const auto d = a.rows();
  const Matrix e = t == 0.0 ? Matrix(Matrix::Identity(d, d)) : expm(Matrix(-t * a));
  switch (s) {
    case Symbol::psi1: return std::pow(t, n) * matrix_power(a, n) * e;
    case Symbol::psi2: return e * one_minus_expm(Matrix(static_cast<double>(n) * t * a));
    case Symbol::A_exp_N: return a * expm(Matrix(-static_cast<double>(n) * t * a));
    case Symbol::exp_N: return expm(Matrix(-static_cast<double>(n) * t * a));
    case Symbol::t_pow_A_pow: return std::pow(t, n - 1) * matrix_power(a, n) * e;
  }
  throw std::invalid_argument("unknown symbol");
}

}  // namespace detail

/// The symbol as a d x d matrix.
inline Matrix symbol_matrix(Symbol s, const SectorialOperator& a, int n, double t,
                            ExpPath path = ExpPath::automatic) {
  require_symbol_param(n);
  if (detail::use_spectral(a, path)) {
    const auto& sd = *a.spectral();
    Vector phi = sd.values.unaryExpr([&](Complex l) { return symbol_scalar(s, n, t, l); });
    return sd.vectors * phi.asDiagonal() * sd.inverse;
  }
  return detail::symbol_matrix_dense(s, a.matrix(), n, t);
}

/// The symbol applied to h.
inline HVector apply_symbol(Symbol s, const SectorialOperator& a, int n, double t, const HVector& h,
                            ExpPath path = ExpPath::automatic) {
  require_symbol_param(n);
  detail::require_dim(a, h.size(), "apply_symbol");
  if (detail::use_spectral(a, path)) {
    const auto& sd = *a.spectral();
    Vector phi = sd.values.unaryExpr([&](Complex l) { return symbol_scalar(s, n, t, l); });
    return sd.vectors * phi.cwiseProduct(sd.inverse * h);
  }
  return detail::symbol_matrix_dense(s, a.matrix(), n, t) * h;
}

}  // namespace maxreg

#endif  // MAXREG_SYMBOLS_HPP
