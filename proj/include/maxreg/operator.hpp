#ifndef MAXREG_OPERATOR_HPP
#define MAXREG_OPERATOR_HPP

#include "maxreg/expm.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxreg {

/// Element of the finite-dimensional Hilbert space H = C^d.
using HVector = Vector;

enum class OperatorKind { diagonalizable, self_adjoint, general };

inline const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::diagonalizable: return "diagonalizable";
    case OperatorKind::self_adjoint: return "self_adjoint";
    case OperatorKind::general: return "general";
  }
  return "?";
}

/// Evaluation route for functions of A.
enum class ExpPath { automatic, spectral, pade };

/// A = V diag(values) V^{-1}.
struct SpectralData {
  Matrix vectors;
  Vector values;
  Matrix inverse;
};

inline double condition_number(const Matrix& v) {
  Eigen::JacobiSVD<Matrix> svd(v);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

/// Matrix A with spectrum in the open sector {|arg z| < pi/2}; -A generates a bounded
/// analytic semigroup. Immutable after construction.
class SectorialOperator {
 public:
  /// Classifies `a` by eigensolve. Hermitian input becomes self_adjoint; otherwise the
  /// eigenvector basis is cached when cond(V) < 1e10 and it reproduces A to 1e-10.
  static SectorialOperator from_matrix(Matrix a, bool cache_spectral = true) {
    if (a.rows() == 0 || a.rows() != a.cols())
      throw std::invalid_argument("SectorialOperator: matrix must be square and non-empty");
    if (!a.allFinite()) throw std::invalid_argument("SectorialOperator: non-finite entries");
    SectorialOperator op;
    op.matrix_ = std::move(a);
    const double scale = op.norm();
    const bool hermitian = (op.matrix_ - op.matrix_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + scale);
    if (hermitian) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix_);
      if (es.info() != Eigen::Success) throw std::runtime_error("SectorialOperator: eigensolve failed");
      op.eigenvalues_ = es.eigenvalues().cast<Complex>();
      op.kind_ = OperatorKind::self_adjoint;
      if (cache_spectral) op.spectral_ = SpectralData{es.eigenvectors(), op.eigenvalues_, es.eigenvectors().adjoint()};
    } else {
      Eigen::ComplexEigenSolver<Matrix> es(op.matrix_);
      if (es.info() != Eigen::Success) throw std::runtime_error("SectorialOperator: eigensolve failed");
      op.eigenvalues_ = es.eigenvalues();
      op.kind_ = OperatorKind::general;
      const Matrix& v = es.eigenvectors();
      if (cache_spectral && condition_number(v) < 1e10) {
        SpectralData sd{v, op.eigenvalues_, v.inverse()};
        if (reconstruction_error(sd, op.matrix_) <= 1e-10 * scale) {
          op.spectral_ = std::move(sd);
          op.kind_ = OperatorKind::diagonalizable;
        }
      }
    }
    op.validate_spectrum();
    return op;
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  OperatorKind kind() const { return kind_; }
  const std::optional<SpectralData>& spectral() const { return spectral_; }
  const Vector& eigenvalues() const { return eigenvalues_; }

  /// max |arg lambda| over the spectrum.
  double sector_angle() const {
    double w = 0.0;
    for (const auto& l : eigenvalues_) w = std::max(w, std::abs(std::arg(l)));
    return w;
  }
  double min_real_eigenvalue() const { return eigenvalues_.real().minCoeff(); }
  double spectral_radius() const { return eigenvalues_.cwiseAbs().maxCoeff(); }

  /// Operator 2-norm.
  double norm() const {
    Eigen::JacobiSVD<Matrix> svd(matrix_);
    return svd.singularValues()(0);
  }

  /// A*, with the spectral data transported when present.
  SectorialOperator adjoint() const {
    SectorialOperator op;
    op.matrix_ = matrix_.adjoint();
    op.eigenvalues_ = eigenvalues_.conjugate();
    op.kind_ = kind_;
    if (spectral_)
      op.spectral_ = SpectralData{spectral_->inverse.adjoint(), spectral_->values.conjugate(),
                                  spectral_->vectors.adjoint()};
    return op;
  }

  /// c A for c > 0.
  SectorialOperator scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("SectorialOperator::scaled: c must be positive");
    SectorialOperator op = *this;
    op.matrix_ *= c;
    op.eigenvalues_ *= c;
    if (op.spectral_) op.spectral_->values *= c;
    return op;
  }

  /// Same matrix with the spectral cache dropped; every function of A then goes through expm.
  SectorialOperator without_spectral_data() const {
    SectorialOperator op = *this;
    op.spectral_.reset();
    op.kind_ = OperatorKind::general;
    return op;
  }

  static double reconstruction_error(const SpectralData& sd, const Matrix& a) {
    const Matrix r = sd.vectors * sd.values.asDiagonal() * sd.inverse - a;
    Eigen::JacobiSVD<Matrix> svd(r);
    return svd.singularValues()(0);
  }

 private:
  friend SectorialOperator make_diagonalizable(const Matrix&, const std::vector<Complex>&);
  friend SectorialOperator make_discrete_laplacian(int, double);

  void validate_spectrum() const {
    for (const auto& l : eigenvalues_) {
      if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
        throw std::invalid_argument("SectorialOperator: non-finite eigenvalue");
      if (!(l.real() > 0.0))
        throw std::invalid_argument("SectorialOperator: eigenvalue outside the open right half-plane");
    }
  }

  Matrix matrix_;
  Vector eigenvalues_;
  OperatorKind kind_ = OperatorKind::general;
  std::optional<SpectralData> spectral_;
};

/// A = V diag(eigenvalues) V^{-1}.
inline SectorialOperator make_diagonalizable(const Matrix& v, const std::vector<Complex>& eigenvalues) {
  const auto d = static_cast<Eigen::Index>(eigenvalues.size());
  if (d == 0 || v.rows() != d || v.cols() != d)
    throw std::invalid_argument("make_diagonalizable: V must be square with one column per eigenvalue");
  for (const auto& l : eigenvalues) {
    if (!(l.real() > 0.0) || std::abs(std::arg(l)) >= std::numbers::pi / 2)
      throw std::invalid_argument("make_diagonalizable: eigenvalue outside the open right half-plane");
  }
  if (!(condition_number(v) < 1e10)) throw std::invalid_argument("make_diagonalizable: V is singular or ill-conditioned");
  SectorialOperator op;
  op.eigenvalues_ = Eigen::Map<const Vector>(eigenvalues.data(), d);
  Matrix vinv = v.inverse();
  op.matrix_ = v * op.eigenvalues_.asDiagonal() * vinv;
  const bool unitary = (v.adjoint() * v - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12;
  const bool real_spectrum = op.eigenvalues_.imag().cwiseAbs().maxCoeff() == 0.0;
  op.kind_ = unitary && real_spectrum ? OperatorKind::self_adjoint : OperatorKind::diagonalizable;
  if (op.kind_ == OperatorKind::self_adjoint) op.matrix_ = 0.5 * (op.matrix_ + op.matrix_.adjoint()).eval();
  op.spectral_ = SpectralData{v, op.eigenvalues_, std::move(vinv)};
  return op;
}

inline SectorialOperator make_scalar(Complex lambda) {
  return make_diagonalizable(Matrix::Identity(1, 1), {lambda});
}

/// (1/h^2) tridiag(-1, 2, -1) with the closed-form sine eigenbasis.
inline SectorialOperator make_discrete_laplacian(int d, double h) {
  if (d < 1) throw std::invalid_argument("make_discrete_laplacian: d must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("make_discrete_laplacian: h must be positive");
  const double inv_h2 = 1.0 / (h * h);
  SectorialOperator op;
  op.matrix_ = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    op.matrix_(i, i) = 2.0 * inv_h2;
    if (i + 1 < d) {
      op.matrix_(i, i + 1) = -inv_h2;
      op.matrix_(i + 1, i) = -inv_h2;
    }
  }
  Matrix v(d, d);
  Vector values(d);
  const double norm = std::sqrt(2.0 / (d + 1));
  for (int k = 1; k <= d; ++k) {
    const double s = std::sin(k * std::numbers::pi / (2.0 * (d + 1)));
    values(k - 1) = 4.0 * inv_h2 * s * s;
    for (int j = 1; j <= d; ++j) v(j - 1, k - 1) = norm * std::sin(j * k * std::numbers::pi / (d + 1));
  }
  op.eigenvalues_ = values;
  op.kind_ = OperatorKind::self_adjoint;
  op.spectral_ = SpectralData{v, values, v.adjoint()};
  return op;
}

namespace detail {

inline void require_dim(const SectorialOperator& a, Eigen::Index n, const char* where) {
  if (n != a.dim()) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

inline bool use_spectral(const SectorialOperator& a, ExpPath path) {
  if (path == ExpPath::pade) return false;
  if (path == ExpPath::spectral && !a.spectral())
    throw std::invalid_argument("spectral path requested but no spectral data is cached");
  return a.spectral().has_value();
}

}  // namespace detail

/// e^{-tA} as a dense matrix.
inline Matrix semigroup_matrix(const SectorialOperator& a, double t, ExpPath path = ExpPath::automatic) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup: t must be nonnegative");
  const auto d = a.dim();
  if (t == 0.0) return Matrix::Identity(d, d);
  if (detail::use_spectral(a, path)) {
    const auto& sd = *a.spectral();
    return sd.vectors * (-t * sd.values).array().exp().matrix().asDiagonal() * sd.inverse;
  }
  return expm(Matrix(-t * a.matrix()));
}

/// e^{-tA} h.
inline HVector semigroup_apply(const SectorialOperator& a, double t, const HVector& h,
                               ExpPath path = ExpPath::automatic) {
  detail::require_dim(a, h.size(), "semigroup_apply");
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup: t must be nonnegative");
  if (t == 0.0) return h;
  if (detail::use_spectral(a, path)) {
    const auto& sd = *a.spectral();
    const Vector c = sd.inverse * h;
    return sd.vectors * (-t * sd.values).array().exp().matrix().cwiseProduct(c);
  }
  return expm(Matrix(-t * a.matrix())) * h;
}

/// I - e^{-dt A} = the exact integral of A e^{-tau A} over [0, dt].
inline Matrix local_kernel_matrix(const SectorialOperator& a, double dt, ExpPath path = ExpPath::automatic) {
  if (!(dt > 0.0)) throw std::invalid_argument("local_kernel_integral: dt must be positive");
  if (detail::use_spectral(a, path)) {
    const auto& sd = *a.spectral();
    Vector p = sd.values.unaryExpr([dt](Complex l) { return one_minus_exp(dt * l); });
    return sd.vectors * p.asDiagonal() * sd.inverse;
  }
  return one_minus_expm(Matrix(dt * a.matrix()));
}

inline HVector local_kernel_integral(const SectorialOperator& a, double dt, const HVector& h,
                                     ExpPath path = ExpPath::automatic) {
  detail::require_dim(a, h.size(), "local_kernel_integral");
  if (!(dt > 0.0)) throw std::invalid_argument("local_kernel_integral: dt must be positive");
  if (detail::use_spectral(a, path)) {
    const auto& sd = *a.spectral();
    Vector p = sd.values.unaryExpr([dt](Complex l) { return one_minus_exp(dt * l); });
    return sd.vectors * p.cwiseProduct(sd.inverse * h);
  }
  return one_minus_expm(Matrix(dt * a.matrix())) * h;
}

}  // namespace maxreg

#endif  // MAXREG_OPERATOR_HPP
