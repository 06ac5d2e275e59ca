#pragma once

#include "framelab/unconditional.hpp"

#include <sstream>

namespace framelab {

// Frame multiplier M_m = sum_i m_i phi_i psi_i^adj: analyze against psi,
// scale by the symbol, synthesize with phi.
template <class Scalar>
MatrixX<Scalar> multiplier_matrix(const VectorX<Scalar>& symbol, const MatrixX<Scalar>& synth,
                                  const MatrixX<Scalar>& anal) {
  detail::require_frame(synth);
  detail::require_frame(anal);
  if (synth.rows() != anal.rows() || synth.cols() != anal.cols()) {
    std::ostringstream msg;
    msg << "multiplier frames must match: " << synth.rows() << " x " << synth.cols() << " vs "
        << anal.rows() << " x " << anal.cols();
    throw ValidationError(msg.str());
  }
  if (symbol.size() != synth.cols()) {
    std::ostringstream msg;
    msg << "symbol length " << symbol.size() << " does not match vector count " << synth.cols();
    throw ValidationError(msg.str());
  }
  return synth * symbol.asDiagonal() * anal.adjoint();
}

template <class Scalar>
MatrixX<Scalar> multiplier_matrix(const VectorX<Scalar>& symbol, const MatrixX<Scalar>& frame) {
  return multiplier_matrix(symbol, frame, frame);
}

template <class Scalar>
double multiplier_norm(const VectorX<Scalar>& symbol, const MatrixX<Scalar>& synth,
                       const MatrixX<Scalar>& anal) {
  return spectral_norm(multiplier_matrix(symbol, synth, anal));
}

template <class Scalar>
double multiplier_norm(const VectorX<Scalar>& symbol, const MatrixX<Scalar>& frame) {
  return spectral_norm(multiplier_matrix(symbol, frame, frame));
}

// sup over real symbols with |m_i| <= 1 of ||M_m S^+|| for the self-dual
// multiplier of one frame, i.e. the norm relative to S. Convexity puts the
// supremum at a sign vertex, so this is exactly c_a.
template <class Scalar>
double box_multiplier_sup_relative(const MatrixX<Scalar>& frame, Index exact_limit = 16,
                                   double tol = kRankTol) {
  return box_constant(frame, exact_limit, tol);
}

}  // namespace framelab
