#pragma once

#include "framelab/common.hpp"

#include <cmath>
#include <cstdint>

namespace framelab {

// splitmix64 with Box-Muller on top. Standard-library engines and
// distributions are avoided on purpose: seeded gallery output has to be
// bit-identical across platforms, and <random> distributions are not.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; spare value cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do {
      u = next_double();
    } while (u <= 0.0);
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

template <class Scalar>
Scalar random_normal_scalar(SplitMix64& rng) {
  if constexpr (is_complex_v<Scalar>) {
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    return Scalar(re, im);
  } else {
    return static_cast<Scalar>(rng.next_normal());
  }
}

// Entries drawn row-major so reshaping choices elsewhere cannot change the
// stream a given seed produces.
template <class Scalar>
MatrixX<Scalar> random_gaussian_matrix(Index rows, Index cols, SplitMix64& rng) {
  MatrixX<Scalar> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = random_normal_scalar<Scalar>(rng);
  return m;
}

template <class Scalar>
VectorX<Scalar> random_unit_vector(Index dim, SplitMix64& rng) {
  VectorX<Scalar> v(dim);
  double norm = 0.0;
  do {
    for (Index i = 0; i < dim; ++i) v(i) = random_normal_scalar<Scalar>(rng);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

// Haar-distributed orthogonal (real) or unitary (complex) matrix: QR of a
// Gaussian matrix with the R diagonal phase folded into Q.
template <class Scalar>
MatrixX<Scalar> haar_rotation(Index dim, SplitMix64& rng) {
  MatrixX<Scalar> g = random_gaussian_matrix<Scalar>(dim, dim, rng);
  Eigen::HouseholderQR<MatrixX<Scalar>> qr(g);
  MatrixX<Scalar> q = qr.householderQ();
  MatrixX<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Scalar rjj = r(j, j);
    const double mag = std::abs(rjj);
    const Scalar phase = mag > 0 ? Scalar(rjj / mag) : Scalar(1);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace framelab
