#pragma once

#include "framelab/spectral.hpp"

#include <bit>
#include <cstdint>
#include <sstream>
#include <vector>

namespace framelab {

// Frames are dense d x N matrices with one vector per column; the matrix is
// the synthesis operator.

// Index subset of {0, ..., N-1}, bit i <-> column i. N <= 64 is far beyond
// anything enumerable here.
struct SubsetMask {
  std::uint64_t bits = 0;

  static SubsetMask full(Index n) {
    return {n >= 64 ? ~0ULL : ((1ULL << n) - 1ULL)};
  }
  static SubsetMask from_indices(const std::vector<Index>& idx) {
    SubsetMask m;
    for (Index i : idx) m.bits |= (1ULL << i);
    return m;
  }

  bool contains(Index i) const { return (bits >> i) & 1ULL; }
  int count() const { return std::popcount(bits); }
  SubsetMask complement(Index n) const { return {~bits & full(n).bits}; }

  std::vector<Index> indices() const {
    std::vector<Index> out;
    for (std::uint64_t b = bits; b;) {
      const int i = std::countr_zero(b);
      out.push_back(i);
      b &= b - 1;
    }
    return out;
  }

  bool operator==(const SubsetMask&) const = default;
};

// Lexicographic order on the sorted index lists, used for witness
// tie-breaking: {0,1} < {0,2} < {1}. Not the same as integer order on bits.
inline bool subset_lex_less(SubsetMask a, SubsetMask b) {
  while (a.bits && b.bits) {
    const int ia = std::countr_zero(a.bits);
    const int ib = std::countr_zero(b.bits);
    if (ia != ib) return ia < ib;
    a.bits &= a.bits - 1;
    b.bits &= b.bits - 1;
  }
  return a.bits == 0 && b.bits != 0;  // proper prefix is smaller
}

// Entrywise order on sign patterns with +1 < -1, from index 0 up.
inline bool sign_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    if (a[k] != b[k]) return a[k] > b[k];  // +1 beats -1
  }
  return a.size() < b.size();
}

struct FrameBounds {
  double lower = 0.0;  // optimal A on the span
  double upper = 0.0;  // optimal B
  Index rank = 0;
  bool spanning = false;
};

struct FrameFlags {
  bool equal_norm = false;
  bool equiangular = false;
  bool tight = false;
  bool parseval = false;
  bool spanning = false;
};

namespace detail {

template <class Scalar>
void require_frame(const MatrixX<Scalar>& frame) {
  if (frame.rows() < 1 || frame.cols() < 1) {
    std::ostringstream msg;
    msg << "frame must have at least one vector in dimension >= 1, got " << frame.rows() << " x "
        << frame.cols();
    throw ValidationError(msg.str());
  }
}

template <class Scalar>
void require_mask(const MatrixX<Scalar>& frame, SubsetMask mask) {
  const Index n = frame.cols();
  if (n < 64 && (mask.bits >> n) != 0) {
    std::ostringstream msg;
    msg << "subset mask refers to indices >= " << n;
    throw ValidationError(msg.str());
  }
}

}  // namespace detail

template <class Scalar>
VectorX<Scalar> synthesize(const MatrixX<Scalar>& frame, const VectorX<Scalar>& coeffs) {
  detail::require_frame(frame);
  if (coeffs.size() != frame.cols()) {
    std::ostringstream msg;
    msg << "coefficient length " << coeffs.size() << " does not match vector count "
        << frame.cols();
    throw ValidationError(msg.str());
  }
  return frame * coeffs;
}

template <class Scalar>
VectorX<Scalar> analyze(const MatrixX<Scalar>& frame, const VectorX<Scalar>& x) {
  detail::require_frame(frame);
  if (x.size() != frame.rows()) {
    std::ostringstream msg;
    msg << "vector length " << x.size() << " does not match dimension " << frame.rows();
    throw ValidationError(msg.str());
  }
  return frame.adjoint() * x;
}

template <class Scalar>
MatrixX<Scalar> frame_operator(const MatrixX<Scalar>& frame) {
  detail::require_frame(frame);
  return frame * frame.adjoint();
}

template <class Scalar>
MatrixX<Scalar> gramian(const MatrixX<Scalar>& frame) {
  detail::require_frame(frame);
  return frame.adjoint() * frame;
}

// Sum of phi_i phi_i^adj over the listed columns; zero matrix for the empty
// list. Index lists scale past the 64-column mask limit.
template <class Scalar>
MatrixX<Scalar> columns_operator(const MatrixX<Scalar>& frame, const std::vector<Index>& idx) {
  detail::require_frame(frame);
  const Index d = frame.rows();
  if (idx.empty()) return MatrixX<Scalar>::Zero(d, d);
  MatrixX<Scalar> sel(d, static_cast<Index>(idx.size()));
  Index k = 0;
  for (Index i : idx) {
    if (i < 0 || i >= frame.cols()) {
      std::ostringstream msg;
      msg << "column index " << i << " out of range for " << frame.cols() << " vectors";
      throw ValidationError(msg.str());
    }
    sel.col(k++) = frame.col(i);
  }
  return sel * sel.adjoint();
}

template <class Scalar>
MatrixX<Scalar> subset_operator(const MatrixX<Scalar>& frame, SubsetMask mask) {
  detail::require_mask(frame, mask);
  return columns_operator(frame, mask.indices());
}

// Optimal bounds on the span of the frame. A is the smallest frame-operator
// eigenvalue above the rank cutoff tol * lambda_max, B the largest.
template <class Scalar>
FrameBounds frame_bounds(const MatrixX<Scalar>& frame, double tol = kRankTol) {
  detail::require_frame(frame);
  if (frame.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("empty span: all vectors are zero");
  const auto eig = hermitian_eig(MatrixX<Scalar>(frame_operator(frame)));
  const Index d = frame.rows();
  const double top = eig.eigenvalues(d - 1);
  if (!(top > 0.0)) throw ValidationError("empty span: frame operator has no positive eigenvalue");
  const double cutoff = tol * top;

  FrameBounds out;
  out.upper = top;
  for (Index k = 0; k < d; ++k) {
    if (eig.eigenvalues(k) > cutoff) {
      out.lower = eig.eigenvalues(k);
      out.rank = d - k;
      break;
    }
  }
  out.spanning = (out.rank == d);
  return out;
}

template <class Scalar>
FrameFlags classify(const MatrixX<Scalar>& frame, double tol = kRankTol) {
  detail::require_frame(frame);
  const Index n = frame.cols();

  RealVector norms(n);
  for (Index i = 0; i < n; ++i) norms(i) = frame.col(i).norm();
  const double nmax = norms.maxCoeff();
  const double nmin = norms.minCoeff();

  FrameFlags out;
  out.equal_norm = (nmax - nmin) <= tol * std::max(nmax, kAbsFloor);

  // Equiangular needs all pairwise |<phi_i, phi_j>| equal and nonzero; an
  // orthonormal basis is therefore not equiangular.
  if (n >= 2) {
    double omax = 0.0, omin = 0.0;
    bool first = true;
    for (Index j = 1; j < n; ++j) {
      for (Index i = 0; i < j; ++i) {
        const double a = std::abs(frame.col(j).dot(frame.col(i)));
        if (first) {
          omax = omin = a;
          first = false;
        } else {
          omax = std::max(omax, a);
          omin = std::min(omin, a);
        }
      }
    }
    const double scale = std::max(nmax * nmax, kAbsFloor);
    out.equiangular = (omax - omin) <= tol * scale && omin > tol * scale;
  }

  const FrameBounds fb = frame_bounds(frame, tol);
  out.tight = (fb.upper - fb.lower) <= tol * fb.upper;
  out.parseval = out.tight && std::abs(fb.upper - 1.0) <= tol;
  out.spanning = fb.spanning;
  return out;
}

}  // namespace framelab
