#pragma once

#include "framelab/frame.hpp"
#include "framelab/rng.hpp"

#include <sstream>
#include <vector>

namespace framelab {

// Simplex frame in R^N: phi_i = e_i - (1/N) sum_k e_k. Parseval on its span,
// the hyperplane of zero-sum vectors; Gramian entries delta_ij - 1/N.
inline RealMatrix simplex_frame(Index n) {
  if (n < 3) throw ValidationError("simplex_frame requires N >= 3");
  RealMatrix f = RealMatrix::Constant(n, n, -1.0 / static_cast<double>(n));
  f.diagonal().array() += 1.0;
  return f;
}

// The simplex frame with the first vector removed. Still spans the same
// hyperplane, but the bounds drop to (1/N, 1).
inline RealMatrix simplex_subframe(Index n) {
  if (n < 3) throw ValidationError("simplex_subframe requires N >= 3");
  return simplex_frame(n).rightCols(n - 1);
}

// Shift frame in R^(n+1): phi_i = e_i + (1/2) e_(i+1), i = 0..n-1. The Gramian
// is tridiagonal Toeplitz with diagonal 5/4 and off-diagonal 1/2, so the
// nonzero frame-operator spectrum is 5/4 + cos(k pi / (n+1)), k = 1..n.
inline RealMatrix shift_frame(Index n) {
  if (n < 1) throw ValidationError("shift_frame requires n >= 1");
  RealMatrix f = RealMatrix::Zero(n + 1, n);
  for (Index i = 0; i < n; ++i) {
    f(i, i) = 1.0;
    f(i + 1, i) = 0.5;
  }
  return f;
}

// Alternating sign pattern (+1, -1, +1, ...) together with the same pattern
// as a coefficient vector. Synthesizing the coefficients against shift_frame(n)
// gives squared norm 1 + n/4, versus 5/4 + 9(n-1)/4 for all-ones coefficients.
struct AlternatingWitness {
  std::vector<int> signs;
  RealVector coefficients;
};

inline AlternatingWitness alternating_witness(Index n) {
  if (n < 1) throw ValidationError("alternating_witness requires n >= 1");
  AlternatingWitness w;
  w.signs.resize(static_cast<std::size_t>(n));
  w.coefficients.resize(n);
  for (Index i = 0; i < n; ++i) {
    const int s = (i % 2 == 0) ? 1 : -1;
    w.signs[static_cast<std::size_t>(i)] = s;
    w.coefficients(i) = static_cast<double>(s);
  }
  return w;
}

template <class Scalar>
MatrixX<Scalar> random_frame(Index dim, Index count, std::uint64_t seed) {
  if (dim < 1 || count < 1) throw ValidationError("random_frame requires dim >= 1 and count >= 1");
  SplitMix64 rng(seed);
  return random_gaussian_matrix<Scalar>(dim, count, rng);
}

// S^(-1/2) phi_i on the span: the canonical Parseval frame associated with F.
template <class Scalar>
MatrixX<Scalar> canonical_tight(const MatrixX<Scalar>& frame, double tol = kRankTol) {
  detail::require_frame(frame);
  if (frame.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("empty span: all vectors are zero");
  const auto eig = hermitian_eig(MatrixX<Scalar>(frame_operator(frame)));
  const Index d = frame.rows();
  const double cutoff = tol * eig.eigenvalues(d - 1);
  MatrixX<Scalar> map = MatrixX<Scalar>::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    const double lam = eig.eigenvalues(k);
    if (lam > cutoff)
      map += eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint() / std::sqrt(lam);
  }
  return map * frame;
}

}  // namespace framelab
