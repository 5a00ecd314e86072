#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace maxreg;

namespace {

const TimeGrid kGrid = make_log_grid(1e-4, 1e3, 2000);

GridFunction scalar_function(const TimeGrid& g, const std::function<double(double)>& f) {
  return sample(g, 1, [&](double s) { return HVector::Constant(1, f(s)); });
}

}  // namespace

TEST(Sweep, GammaIntegrals) {
  const auto a = make_scalar(1.0);
  const auto e = scalar_function(kGrid, [](double s) { return std::exp(-s); });
  // int e^{-Ns} e^{-s} ds = 1/(N+1)
  for (int n = 1; n <= 3; ++n) EXPECT_NEAR(sweep(a, Symbol::exp_N, n, e).value(0).real(), 1.0 / (n + 1), 1e-6);
  // int (s)^N e^{-s} s e^{-s} ds = (N+1)!/2^{N+2}
  const auto p = scalar_function(kGrid, [](double s) { return s * std::exp(-s); });
  for (int n = 1; n <= 3; ++n)
    EXPECT_NEAR(sweep(a, Symbol::psi1, n, p).value(0).real(), oracle::factorial(n + 1) / std::ldexp(1.0, n + 2), 1e-6);
}

TEST(Sweep, HeadClosureIsExactForLinearIntegrands) {
  // kernel e^{-1e-9 s} = 1 to 1e-10, so the integrand is 2 + 3s
  const auto a = make_scalar(1e-9);
  const auto g = make_log_grid(1e-2, 1e-1, 200);
  const auto f = scalar_function(g, [](double s) { return 2.0 + 3.0 * s; });
  const auto r = sweep(a, Symbol::exp_N, 1, f);
  // int_0^{0.01} (2 + 3s) ds
  EXPECT_NEAR(r.head_closure, 0.02 + 1.5e-4, 1e-11);
  // int_0^{0.1}: the rest is trapezoid in ln t, second order
  EXPECT_NEAR(r.value(0).real(), 0.2 + 1.5e-2, 1e-5);
}

TEST(Sweep, IsLinear) {
  std::mt19937_64 rng(4);
  const auto a = make_discrete_laplacian(8, 0.5);
  GridFunction f(kGrid, 8);
  GridFunction g(kGrid, 8);
  for (int k = 0; k < kGrid.size(); ++k) {
    f.value(k) = oracle::random_vector(8, rng);
    g.value(k) = oracle::random_vector(8, rng);
  }
  const Complex p(1.5, -0.5);
  const HVector lhs = sweep(a, Symbol::A_exp_N, 2, f + p * g).value;
  const HVector rhs = sweep(a, Symbol::A_exp_N, 2, f).value + p * sweep(a, Symbol::A_exp_N, 2, g).value;
  EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(ZeroBalayage, ValueAndCertificate) {
  const auto a = make_scalar(1.0);
  // s (e^{-s} - (9/4) e^{-2s}) at s = 1
  EXPECT_NEAR(zero_balayage_function(a, HVector::Ones(1))(1.0)(0).real(), std::exp(-1.0) - 2.25 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(std::exp(-1.0) - 2.25 * std::exp(-2.0), 0.0633750, 1e-7);
  std::mt19937_64 rng(5);
  for (const auto& op : {make_scalar(1.0), make_discrete_laplacian(8, 0.5), oracle::nonnormal()}) {
    const HVector h = oracle::random_vector(op.dim(), rng);
    const auto f = zero_balayage_input(op, h, kGrid);
    EXPECT_LE(sweep(op, Symbol::A_exp_N, 1, f).value.norm(), 1e-6 * h.norm());
  }
}

TEST(WeakConvergence, ConvergentAndDivergentInputs) {
  const auto a = make_scalar(1.0);
  EXPECT_TRUE(weak_convergence_check(a, scalar_function(kGrid, [](double s) { return std::exp(-s); })).converged);
  // the kernel decays exponentially, so h/(1+t) is fine at infinity
  EXPECT_TRUE(weak_convergence_check(a, scalar_function(kGrid, [](double s) { return 1.0 / (1.0 + s); })).converged);
  // h/t: logarithmic divergence at 0
  const auto bad = weak_convergence_check(a, scalar_function(kGrid, [](double s) { return 1.0 / s; }));
  EXPECT_FALSE(bad.converged);
  EXPECT_GT(bad.increments[0], 0.5 * bad.increments[1]);
}

TEST(WeakConvergence, PassAtOneImpliesPassAtHigherN) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto a = make_discrete_laplacian(4, 1.0);
  int admissible = 0;
  for (int trial = 0; trial < 20; ++trial) {
    // s^p e^{-b s} h with p in (-0.5, 2): convergent against e^{-sA} at both ends
    const double p = -0.5 + 2.5 * u(rng);
    const double b = 0.1 + 2.0 * u(rng);
    const HVector h = oracle::random_vector(4, rng);
    const auto f = sample(kGrid, 4, [&](double s) { return HVector(std::pow(s, p) * std::exp(-b * s) * h); });
    if (!weak_convergence_check(a, f, 1).converged) continue;
    ++admissible;
    for (int n : {2, 3, 5}) EXPECT_TRUE(weak_convergence_check(a, f, n).converged) << trial << " N=" << n;
  }
  EXPECT_EQ(admissible, 20);
}

TEST(Fubini, BalayagePlusAgainstIteratedIntegral) {
  // int A e^{-NtA} M+(f) dt with f a bump on [0.2, 3]: library (M+ then sweep) vs nested quadrature
  const double lo = 0.2;
  const double hi = 3.0;
  const auto f = oracle::bump(lo, hi);
  for (double lambda : {0.7, 2.0}) {
    const auto a = make_scalar(lambda);
    const auto g = make_log_grid(1e-4, 1e3, 4000);
    const auto m = mplus_fast(a, scalar_function(g, f)).values;
    for (int n : {1, 2}) {
      const double ref = oracle::balayage_plus_iterated(f, lo, hi, lambda, n);
      EXPECT_NEAR(sweep(a, Symbol::A_exp_N, n, m).value(0).real() / ref, 1.0, 1e-4) << lambda << " " << n;
    }
  }
}

TEST(Fubini, BalayageMinusAgainstIteratedIntegral) {
  const double lo = 0.2;
  const double hi = 3.0;
  const auto f = oracle::bump(lo, hi);
  const auto a = make_scalar(1.3);
  const auto g = make_log_grid(1e-4, 1e3, 4000);
  const auto m = mminus_fast(a, scalar_function(g, f)).values;
  for (int n : {1, 2, 3}) {
    const double ref = oracle::balayage_minus_iterated(f, lo, hi, 1.3, n);
    EXPECT_NEAR(sweep(a, Symbol::psi1, n, m).value(0).real() / ref, 1.0, 1e-4) << n;
  }
}

TEST(DyadicAverage, LinearInterpolationInLogTime) {
  const auto g = make_log_grid(1e-3, 1.0, 500);
  const auto f = scalar_function(g, [](double t) { return t; });
  // (1/tau) int_tau^{2tau} t dt = 1.5 tau
  EXPECT_NEAR(dyadic_average(f, 0.01)(0).real() / 0.015, 1.0, 1e-4);
  EXPECT_THROW(dyadic_average(f, 0.9), std::invalid_argument);
}
