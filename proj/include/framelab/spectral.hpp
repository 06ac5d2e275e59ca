#pragma once

#include "framelab/common.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace framelab {

template <class Scalar>
struct SpectralSummary {
  RealVector eigenvalues;        // ascending
  MatrixX<Scalar> eigenvectors;  // orthonormal columns, matching order
  double residual = 0.0;         // max_k ||M v_k - lambda_k v_k||
};

namespace detail {

template <class Scalar>
void require_square(const MatrixX<Scalar>& m, const char* op) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << op << ": matrix is not square (" << m.rows() << " x " << m.cols() << ")";
    throw ValidationError(msg.str());
  }
  if (m.rows() == 0) {
    std::ostringstream msg;
    msg << op << ": matrix is empty";
    throw ValidationError(msg.str());
  }
}

// Hermitian up to kHermitianTol relative asymmetry; on failure the message
// names the worst entry pair.
template <class Scalar>
void require_hermitian(const MatrixX<Scalar>& m, const char* op) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), kAbsFloor);
  double worst = 0.0;
  Index wi = 0, wj = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      double diff;
      if constexpr (is_complex_v<Scalar>) {
        diff = std::abs(m(i, j) - std::conj(m(j, i)));
      } else {
        diff = std::abs(m(i, j) - m(j, i));
      }
      if (diff > worst) {
        worst = diff;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > kHermitianTol * scale) {
    std::ostringstream msg;
    msg << op << ": matrix is not Hermitian, entry (" << wi << ", " << wj
        << ") differs from the conjugate of (" << wj << ", " << wi << ") by " << worst;
    throw ValidationError(msg.str());
  }
}

}  // namespace detail

template <class Scalar>
SpectralSummary<Scalar> hermitian_eig(const MatrixX<Scalar>& m, double tol = 1e-10) {
  detail::require_square(m, "hermitian_eig");
  detail::require_hermitian(m, "hermitian_eig");

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hermitian_eig: eigensolver failed to converge");

  SpectralSummary<Scalar> out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  double residual = 0.0;
  for (Index k = 0; k < m.cols(); ++k) {
    const double r =
        (m * out.eigenvectors.col(k) - out.eigenvalues(k) * out.eigenvectors.col(k)).norm();
    residual = std::max(residual, r);
  }
  out.residual = residual;

  const double scale = std::max({std::abs(out.eigenvalues(0)),
                                 std::abs(out.eigenvalues(m.cols() - 1)), kAbsFloor});
  if (residual > tol * scale) {
    std::ostringstream msg;
    msg << "hermitian_eig: reconstruction residual " << residual << " exceeds " << tol
        << " * ||M||";
    throw NumericalError(msg.str());
  }
  return out;
}

// Largest singular value, computed as sqrt(lambda_max(M^adj M)); works for any
// rectangular matrix. The Gram product is Hermitian by construction, so it
// goes straight to the solver.
template <class Scalar>
double spectral_norm(const MatrixX<Scalar>& m) {
  if (m.size() == 0) return 0.0;
  const bool tall = m.rows() >= m.cols();
  MatrixX<Scalar> gram = tall ? MatrixX<Scalar>(m.adjoint() * m) : MatrixX<Scalar>(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("spectral_norm: eigensolver failed to converge");
  const double top = solver.eigenvalues()(gram.cols() - 1);
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

template <class Scalar>
double min_eigenvalue(const MatrixX<Scalar>& m) {
  detail::require_square(m, "min_eigenvalue");
  detail::require_hermitian(m, "min_eigenvalue");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("min_eigenvalue: eigensolver failed to converge");
  return solver.eigenvalues()(0);
}

}  // namespace framelab
