#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace maxreg;

namespace {

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(Expm, MatchesEigenReferenceAcrossScales) {
  std::mt19937_64 rng(11);
  for (double scale : {1e-3, 0.1, 1.0, 5.0, 40.0}) {
    for (int d : {1, 3, 8}) {
      const Matrix a = scale * oracle::random_matrix(d, rng) / std::sqrt(static_cast<double>(d));
      EXPECT_LT(rel(expm(a), oracle::expm(a)), 1e-11) << "scale " << scale << " d " << d;
    }
  }
}

TEST(Expm, ZeroAndDiagonal) {
  EXPECT_EQ(expm(Matrix::Zero(3, 3)), Matrix(Matrix::Identity(3, 3)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -2.0;
  d(1, 1) = Complex(0.0, 1.0);
  const Matrix e = expm(d);
  EXPECT_NEAR(std::abs(e(0, 0) - std::exp(-2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(1, 1) - std::exp(Complex(0.0, 1.0))), 0.0, 1e-15);
}

TEST(Expm, OneMinusExpHasNoCancellation) {
  for (double x : {1e-14, 1e-9, 1e-4, 0.3, 0.49, 0.51, 2.0}) {
    EXPECT_NEAR(one_minus_exp(x).real() / -std::expm1(-x), 1.0, 1e-14) << x;
  }
  const Complex z(1e-8, 2e-8);
  EXPECT_LT(std::abs(one_minus_exp(z) - (z - z * z / 2.0 + z * z * z / 6.0)), 1e-15 * std::abs(z));
  std::mt19937_64 rng(3);
  const Matrix x = 0.2 * oracle::random_matrix(4, rng);
  const Matrix ref = Matrix::Identity(4, 4) - oracle::expm(Matrix(-x));
  EXPECT_LT(rel(one_minus_expm(x), ref), 1e-13);
}

TEST(Operator, SemigroupLawOnBothPaths) {
  std::mt19937_64 rng(5);
  const auto a = oracle::random_operator(6, rng);
  const HVector h = oracle::random_vector(6, rng);
  for (ExpPath path : {ExpPath::spectral, ExpPath::pade}) {
    for (double t : {0.1, 1.0, 10.0})
      for (double s : {0.1, 1.0, 10.0}) {
        const HVector lhs = semigroup_apply(a, t + s, h, path);
        const HVector rhs = semigroup_apply(a, t, semigroup_apply(a, s, h, path), path);
        EXPECT_LE((lhs - rhs).norm(), 1e-10 * h.norm()) << t << " " << s;
      }
  }
}

TEST(Operator, SelfAdjointDecayBound) {
  const auto a = make_discrete_laplacian(8, 0.5);
  const double mu = a.min_real_eigenvalue();
  for (double t : {0.0, 0.01, 0.3, 1.0, 7.0}) {
    Eigen::JacobiSVD<Matrix> svd(semigroup_matrix(a, t));
    EXPECT_LE(svd.singularValues()(0), std::exp(-t * mu) + 1e-10);
  }
}

TEST(Operator, SpectralAndPadePathsAgree) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_operator(5, rng, 1.2, 0.15);
    ASSERT_LT(condition_number(a.spectral()->vectors), 1e3);
    for (double t : {1e-3, 0.2, 3.0}) {
      const Matrix s = semigroup_matrix(a, t, ExpPath::spectral);
      EXPECT_LT(rel(s, semigroup_matrix(a, t, ExpPath::pade)), 1e-9);
      EXPECT_LT(rel(s, oracle::expm(Matrix(-t * a.matrix()))), 1e-9);
    }
  }
}

TEST(Operator, LocalKernelMatchesMidpointQuadrature) {
  std::mt19937_64 rng(23);
  const auto a = oracle::random_operator(4, rng);
  const HVector h = oracle::random_vector(4, rng);
  const double dt = 0.7;
  const int m = 10000;
  HVector q = HVector::Zero(4);
  for (int i = 0; i < m; ++i) {
    const double tau = (i + 0.5) * dt / m;
    q += (dt / m) * (a.matrix() * semigroup_apply(a, tau, h));
  }
  for (ExpPath path : {ExpPath::spectral, ExpPath::pade})
    EXPECT_LT((local_kernel_integral(a, dt, h, path) - q).norm() / q.norm(), 1e-6);
}

TEST(Operator, ScalarSemigroupIsExponential) {
  const auto a = make_scalar(Complex(2.0, 0.5));
  const HVector h = HVector::Ones(1);
  for (double t : {0.0, 0.5, 4.0})
    EXPECT_LT(std::abs(semigroup_apply(a, t, h)(0) - std::exp(-t * Complex(2.0, 0.5))), 1e-15);
}

TEST(Operator, ZeroTimeReturnsInputExactly) {
  std::mt19937_64 rng(1);
  const auto a = oracle::random_operator(3, rng);
  const HVector h = oracle::random_vector(3, rng);
  EXPECT_EQ(semigroup_apply(a, 0.0, h), h);
  EXPECT_THROW(semigroup_apply(a, -1.0, h), std::invalid_argument);
  EXPECT_THROW(semigroup_apply(a, 1.0, HVector::Ones(2)), std::invalid_argument);
  EXPECT_THROW(local_kernel_integral(a, 0.0, h), std::invalid_argument);
}

TEST(Operator, ClassificationFromMatrix) {
  const auto lap = make_discrete_laplacian(6, 0.5);
  EXPECT_EQ(SectorialOperator::from_matrix(lap.matrix()).kind(), OperatorKind::self_adjoint);

  std::mt19937_64 rng(9);
  const auto r = oracle::random_operator(4, rng);
  const auto g = SectorialOperator::from_matrix(r.matrix());
  EXPECT_EQ(g.kind(), OperatorKind::diagonalizable);
  EXPECT_TRUE(g.spectral().has_value());

  const auto j = oracle::jordan_block();
  EXPECT_EQ(j.kind(), OperatorKind::general);
  EXPECT_FALSE(j.spectral().has_value());
  // e^{-tJ} = e^{-t} [[1, -t], [0, 1]]
  const Matrix e = semigroup_matrix(j, 2.0);
  EXPECT_NEAR(std::abs(e(0, 1) + 2.0 * std::exp(-2.0)), 0.0, 1e-14);
  EXPECT_THROW(semigroup_matrix(j, 1.0, ExpPath::spectral), std::invalid_argument);
}

TEST(Operator, RejectsNonSectorialInput) {
  EXPECT_THROW(make_scalar(-1.0), std::invalid_argument);
  EXPECT_THROW(make_scalar(Complex(0.0, 1.0)), std::invalid_argument);
  Matrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(make_diagonalizable(singular, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(make_diagonalizable(Matrix::Identity(2, 2), {1.0}), std::invalid_argument);
  EXPECT_THROW(SectorialOperator::from_matrix(Matrix(-Matrix::Identity(2, 2))), std::invalid_argument);
  EXPECT_THROW(SectorialOperator::from_matrix(Matrix(0, 0)), std::invalid_argument);
  EXPECT_THROW(make_discrete_laplacian(0, 0.5), std::invalid_argument);
}

TEST(Operator, LaplacianSpectrumClosedForm) {
  const int d = 8;
  const double h = 0.5;
  const auto a = make_discrete_laplacian(d, h);
  for (int k = 1; k <= d; ++k) {
    const double s = std::sin(k * std::numbers::pi / (2.0 * (d + 1)));
    EXPECT_NEAR(a.eigenvalues()(k - 1).real(), 4.0 * s * s / (h * h), 1e-12);
  }
  EXPECT_LT(SectorialOperator::reconstruction_error(*a.spectral(), a.matrix()), 1e-12);
  EXPECT_EQ(a.kind(), OperatorKind::self_adjoint);
  EXPECT_DOUBLE_EQ(a.sector_angle(), 0.0);
}

TEST(Operator, SectorAngleAndAdjoint) {
  const auto a = oracle::rotated(std::numbers::pi / 3);
  EXPECT_NEAR(a.sector_angle(), std::numbers::pi / 3, 1e-14);
  EXPECT_EQ(a.kind(), OperatorKind::diagonalizable);
  const auto b = a.adjoint();
  EXPECT_LT((b.matrix() - a.matrix().adjoint()).norm(), 1e-14);
  EXPECT_LT(rel(semigroup_matrix(b, 0.8), Matrix(semigroup_matrix(a, 0.8).adjoint())), 1e-13);
  const auto n = oracle::nonnormal().adjoint();
  EXPECT_LT(rel(semigroup_matrix(n, 0.8), semigroup_matrix(n.without_spectral_data(), 0.8)), 1e-12);
}

TEST(Operator, ScaledOperator) {
  const auto a = make_discrete_laplacian(4, 1.0);
  const auto b = a.scaled(3.0);
  EXPECT_LT(rel(semigroup_matrix(b, 0.5), semigroup_matrix(a, 1.5)), 1e-13);
  EXPECT_THROW(a.scaled(0.0), std::invalid_argument);
}

TEST(Symbols, ScalarValues) {
  const Complex l(1.5, 0.5);
  const double t = 0.8;
  const Complex z = t * l;
  EXPECT_LT(std::abs(symbol_scalar(Symbol::psi1, 2, t, l) - z * z * std::exp(-z)), 1e-15);
  EXPECT_LT(std::abs(symbol_scalar(Symbol::psi2, 3, t, l) - std::exp(-z) * (1.0 - std::exp(-3.0 * z))), 1e-15);
  EXPECT_LT(std::abs(symbol_scalar(Symbol::A_exp_N, 2, t, l) - l * std::exp(-2.0 * z)), 1e-15);
  EXPECT_LT(std::abs(symbol_scalar(Symbol::exp_N, 2, t, l) - std::exp(-2.0 * z)), 1e-15);
  EXPECT_LT(std::abs(symbol_scalar(Symbol::t_pow_A_pow, 3, t, l) - t * t * l * l * l * std::exp(-z)), 1e-14);
  // psi2 near t = 0 keeps full relative accuracy: e^{-z}(1 - e^{-z}) ~ z
  EXPECT_NEAR(symbol_scalar(Symbol::psi2, 1, 1e-12, 1.0).real() / 1e-12, 1.0, 1e-11);
}

TEST(Symbols, MatrixFormMatchesDenseOnAllPaths) {
  std::mt19937_64 rng(29);
  const auto a = oracle::random_operator(4, rng);
  const auto dense = a.without_spectral_data();
  for (Symbol s : {Symbol::psi1, Symbol::psi2, Symbol::A_exp_N, Symbol::exp_N, Symbol::t_pow_A_pow})
    for (int n : {1, 2, 3}) EXPECT_LT(rel(symbol_matrix(s, a, n, 0.6), symbol_matrix(s, dense, n, 0.6)), 1e-11);
}

TEST(Symbols, ParsingAndParameterChecks) {
  for (Symbol s : {Symbol::psi1, Symbol::psi2, Symbol::A_exp_N, Symbol::exp_N, Symbol::t_pow_A_pow})
    EXPECT_EQ(parse_symbol(to_string(s)), s);
  EXPECT_THROW(parse_symbol("psi3"), std::invalid_argument);
  EXPECT_THROW(apply_symbol(Symbol::psi1, make_scalar(1.0), 0, 1.0, HVector::Ones(1)), std::invalid_argument);
}
