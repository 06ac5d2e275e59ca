#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace framelab {

using Index = Eigen::Index;

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealMatrix = MatrixX<double>;
using RealVector = VectorX<double>;
using ComplexMatrix = MatrixX<std::complex<double>>;
using ComplexVector = VectorX<std::complex<double>>;

template <class Scalar>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

// Rank / span decisions relative to the largest eigenvalue.
inline constexpr double kRankTol = 1e-10;
// Hermitian symmetry check, relative to the largest entry.
inline constexpr double kHermitianTol = 1e-12;
// Absolute floor so zero matrices do not fail relative checks.
inline constexpr double kAbsFloor = 1e-14;

// Bad user input: malformed files, dimension mismatches, violated preconditions.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Solver trouble: non-convergence, residuals above tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace framelab
