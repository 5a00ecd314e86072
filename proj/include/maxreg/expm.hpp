#ifndef MAXREG_EXPM_HPP
#define MAXREG_EXPM_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace maxreg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace detail {

inline double norm1(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Pade [m/m] numerator coefficients b_0..b_m for m in {3,5,7,9,13}.
inline constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
inline constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
inline constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
inline constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norm for which the degree-m approximant is accurate to unit roundoff.
inline constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                                 9.504178996162932e-1, 2.097847961257068e0,
                                                 5.371920351148152e0};

template <std::size_t M>
Matrix pade_approximant(const Matrix& a, const std::array<double, M>& b) {
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix even = b[0] * id;
  Matrix odd = b[1] * id;
  Matrix power = id;
  for (std::size_t k = 2; k < M; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < M) odd += b[k + 1] * power;
  }
  odd = a * odd;
  return (even - odd).partialPivLu().solve(even + odd);
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with a diagonal Pade approximant.
/// The degree is the smallest of 3, 5, 7, 9, 13 whose theta bound covers ||a||_1;
/// beyond theta_13 the argument is scaled by 2^-s and the result squared s times.
inline Matrix expm(const Matrix& a) {
  const double nrm = detail::norm1(a);
  if (nrm <= detail::kTheta[0]) return detail::pade_approximant(a, detail::kPade3);
  if (nrm <= detail::kTheta[1]) return detail::pade_approximant(a, detail::kPade5);
  if (nrm <= detail::kTheta[2]) return detail::pade_approximant(a, detail::kPade7);
  if (nrm <= detail::kTheta[3]) return detail::pade_approximant(a, detail::kPade9);
  int s = 0;
  if (nrm > detail::kTheta[4]) s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / detail::kTheta[4]))));
  Matrix r = detail::pade_approximant(Matrix(a * std::ldexp(1.0, -s)), detail::kPade13);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

/// 1 - e^{-z} without cancellation for small |z|.
inline Complex one_minus_exp(Complex z) {
  if (std::abs(z) < 0.5) {
    Complex term = z;
    Complex sum = z;
    for (int n = 2; n < 40; ++n) {
      term *= -z / static_cast<double>(n);
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return 1.0 - std::exp(-z);
}

/// I - e^{-X}; Taylor series when ||X||_1 <= 1/2, otherwise I - expm(-X).
inline Matrix one_minus_expm(const Matrix& x) {
  const auto n = x.rows();
  if (detail::norm1(x) <= 0.5) {
    Matrix term = x;
    Matrix sum = x;
    for (int k = 2; k < 40; ++k) {
      term = -(term * x) / static_cast<double>(k);
      sum += term;
      if (detail::norm1(term) <= 1e-18 * detail::norm1(sum)) break;
    }
    return sum;
  }
  return Matrix::Identity(n, n) - expm(-x);
}

}  // namespace maxreg

#endif  // MAXREG_EXPM_HPP
