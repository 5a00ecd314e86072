#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace maxreg;

namespace {
const TimeGrid kGrid = make_log_grid(1e-4, 1e3, 2000);
}

TEST(SquareFunction, Psi1ConstantMatchesGammaIntegral) {
  for (const auto& a : {make_scalar(1.0), make_discrete_laplacian(8, 0.5), make_discrete_laplacian(16, 0.25)}) {
    const auto g = default_grid(a);
    for (int n = 1; n <= 4; ++n)
      EXPECT_NEAR(quadratic_constant(a, Symbol::psi1, n, g) / oracle::psi1_constant(n), 1.0, 1e-3) << n;
  }
  EXPECT_NEAR(quadratic_constant(make_scalar(1.0), Symbol::psi1, 1, kGrid), 0.5, 1e-6);
}

TEST(SquareFunction, Psi2ConstantMatchesFrullani) {
  const auto a = make_discrete_laplacian(8, 0.5);
  for (int n = 1; n <= 4; ++n) {
    const double c = quadratic_constant(a, Symbol::psi2, n, default_grid(a));
    EXPECT_NEAR(c / oracle::psi2_constant(n), 1.0, 1e-3);
    EXPECT_LE(c, 0.5 * n);
  }
}

TEST(SquareFunction, NormOfProbeVector) {
  // |||s A e^{-sA} h|||_{-1} = |h|/2 for self-adjoint A
  std::mt19937_64 rng(3);
  const auto a = make_discrete_laplacian(8, 0.5);
  const HVector h = oracle::random_vector(8, rng);
  EXPECT_NEAR(square_function_norm(a, h, default_grid(a)) / h.norm(), 0.5, 1e-4);
}

TEST(SquareFunction, NormalOperatorWithRotatedSpectrum) {
  // int |z|^2 e^{-2 Re z} dt/t with z = t e^{i theta}: C = 1 / (2 cos theta)
  const double theta = std::numbers::pi / 3;
  const auto a = oracle::rotated(theta);
  EXPECT_NEAR(quadratic_constant(a, Symbol::psi1, 1, kGrid), 1.0 / (2 * std::cos(theta)), 1e-4);
  EXPECT_NEAR(quadratic_constant_adjoint(a, Symbol::psi1, 1, kGrid), 1.0 / (2 * std::cos(theta)), 1e-4);
}

TEST(SquareFunction, GramIsHermitianPositive) {
  const auto a = oracle::nonnormal();
  const Matrix g = square_function_gram(a, Symbol::psi1, 2, kGrid);
  EXPECT_LT((g - g.adjoint()).norm(), 1e-15 * g.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_TRUE(std::isfinite(quadratic_constant(a, Symbol::psi1, 2, kGrid)));
}

TEST(SquareFunction, RejectsOtherSymbols) {
  EXPECT_THROW(quadratic_constant(make_scalar(1.0), Symbol::exp_N, 1, kGrid), std::invalid_argument);
  EXPECT_THROW(quadratic_constant(make_scalar(1.0), Symbol::psi1, 0, kGrid), std::invalid_argument);
}
