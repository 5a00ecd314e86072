#ifndef MAXREG_SQUAREFN_HPP
#define MAXREG_SQUAREFN_HPP

#include "maxreg/timegrid.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace maxreg {

/// Square-function norm of h: the L^2(R+, ds/s; H) norm of s -> sA e^{-sA} h on the grid.
inline double square_function_norm(const SectorialOperator& a, const HVector& h, const TimeGrid& grid) {
  return weighted_norm(sample_symbol(Symbol::psi1, a, 1, h, grid), WeightExponent{-1.0});
}

/// sum_k w_k t_k^{-1} psi(t_k A)* psi(t_k A).
inline Matrix square_function_gram(const SectorialOperator& a, Symbol symbol, int n, const TimeGrid& grid) {
  if (symbol != Symbol::psi1 && symbol != Symbol::psi2)
    throw std::invalid_argument("quadratic_constant: symbol must be psi1 or psi2");
  require_symbol_param(n);
  Matrix gram = Matrix::Zero(a.dim(), a.dim());
  for (int k = 0; k < grid.size(); ++k) {
    const Matrix psi = symbol_matrix(symbol, a, n, grid.node(k));
    gram += (grid.weight(k) / grid.node(k)) * (psi.adjoint() * psi);
  }
  return 0.5 * (gram + gram.adjoint());
}

/// Best constant C in |||psi(sA) h|||_{-1} <= C |h| on the grid, sqrt of the largest
/// eigenvalue of the Gram operator.
inline double quadratic_constant(const SectorialOperator& a, Symbol symbol, int n, const TimeGrid& grid) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(square_function_gram(a, symbol, n, grid), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// The same constant for A*, the hypothesis of the balayage formulae.
inline double quadratic_constant_adjoint(const SectorialOperator& a, Symbol symbol, int n, const TimeGrid& grid) {
  return quadratic_constant(a.adjoint(), symbol, n, grid);
}

}  // namespace maxreg

#endif  // MAXREG_SQUAREFN_HPP
