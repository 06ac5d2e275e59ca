#pragma once

#include "framelab/gallery.hpp"
#include "framelab/unconditional.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <variant>
#include <vector>

namespace framelab {

// A frame is an orthogonal sum of tight frames exactly when every vector is
// an eigenvector of the frame operator, groups of equal eigenvalue are
// mutually orthogonal, and each group's subset operator is lambda times a
// projection. decompose() checks all three and either returns the partition
// or the first structural failure it finds.

struct EigenvectorTest {
  bool is_eigenvector = false;
  double lambda = 0.0;    // Rayleigh quotient <S phi, phi> / ||phi||^2
  double residual = 0.0;  // ||S phi - lambda phi|| / (||S|| ||phi||)
};

template <class Scalar>
EigenvectorTest eigenvector_test(const MatrixX<Scalar>& frame, Index i, double tol = 1e-8) {
  detail::require_frame(frame);
  if (i < 0 || i >= frame.cols()) {
    std::ostringstream msg;
    msg << "column index " << i << " out of range for " << frame.cols() << " vectors";
    throw ValidationError(msg.str());
  }
  const VectorX<Scalar> phi = frame.col(i);
  const double norm = phi.norm();
  if (norm == 0.0) throw ValidationError("eigenvector_test: vector is zero");
  const MatrixX<Scalar> s = frame_operator(frame);
  const VectorX<Scalar> sphi = s * phi;
  const double snorm = spectral_norm(s);

  EigenvectorTest out;
  out.lambda = std::real(Scalar(phi.dot(sphi))) / (norm * norm);
  out.residual = (sphi - Scalar(out.lambda) * phi).norm() / (snorm * norm);
  out.is_eigenvector = out.residual <= tol;
  return out;
}

struct TightGroup {
  std::vector<Index> indices;  // ascending
  double lambda = 0.0;
  Index span_dim = 0;
};

struct TightDecomposition {
  std::vector<TightGroup> groups;  // ascending lambda
  std::vector<Index> null_indices;
  double min_bound = 0.0;       // smallest group lambda
  int ambiguous_clusters = 0;   // transitive merges wider than the cluster tolerance
};

struct FailureWitness {
  enum class Kind { non_eigenvector, cross_inner_product, non_tight_group };
  Kind kind = Kind::non_eigenvector;
  Index index = -1;   // column for non_eigenvector / cross, group ordinal for non_tight_group
  Index index2 = -1;  // second column for cross_inner_product
  double residual = 0.0;
};

inline const char* to_string(FailureWitness::Kind k) {
  switch (k) {
    case FailureWitness::Kind::non_eigenvector:
      return "non_eigenvector";
    case FailureWitness::Kind::cross_inner_product:
      return "cross_inner_product";
    default:
      return "non_tight_group";
  }
}

using DecomposeResult = std::variant<TightDecomposition, FailureWitness>;

template <class Scalar>
DecomposeResult decompose(const MatrixX<Scalar>& frame, double tol = 1e-8,
                          double cluster_tol = 1e-8) {
  detail::require_frame(frame);
  if (frame.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("empty span: all vectors are zero");
  const Index n = frame.cols();
  const MatrixX<Scalar> s = frame_operator(frame);
  const double snorm = spectral_norm(s);

  RealVector norms(n);
  for (Index i = 0; i < n; ++i) norms(i) = frame.col(i).norm();
  const double nmax = norms.maxCoeff();

  TightDecomposition dec;
  std::vector<Index> live;
  std::vector<double> lambdas(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    if (norms(i) <= kAbsFloor * nmax) {
      dec.null_indices.push_back(i);
      continue;
    }
    const VectorX<Scalar> phi = frame.col(i);
    const VectorX<Scalar> sphi = s * phi;
    const double lam = std::real(Scalar(phi.dot(sphi))) / (norms(i) * norms(i));
    const double res = (sphi - Scalar(lam) * phi).norm() / (snorm * norms(i));
    if (res > tol) return FailureWitness{FailureWitness::Kind::non_eigenvector, i, -1, res};
    lambdas[static_cast<std::size_t>(i)] = lam;
    live.push_back(i);
  }

  // Cluster eigenvalues: adjacent gaps below cluster_tol * ||S|| merge, and
  // merging is transitive. A chain whose endpoints drift further apart than
  // the tolerance is counted as ambiguous rather than rejected.
  std::sort(live.begin(), live.end(), [&](Index a, Index b) {
    const double la = lambdas[static_cast<std::size_t>(a)];
    const double lb = lambdas[static_cast<std::size_t>(b)];
    return la < lb || (la == lb && a < b);
  });
  const double gap = cluster_tol * snorm;
  std::vector<std::vector<Index>> clusters;
  for (Index i : live) {
    if (!clusters.empty()) {
      const Index prev = clusters.back().back();
      if (lambdas[static_cast<std::size_t>(i)] - lambdas[static_cast<std::size_t>(prev)] <= gap) {
        clusters.back().push_back(i);
        continue;
      }
    }
    clusters.emplace_back(1, i);
  }

  for (auto& cluster : clusters) {
    const double first = lambdas[static_cast<std::size_t>(cluster.front())];
    const double last = lambdas[static_cast<std::size_t>(cluster.back())];
    if (last - first > gap) ++dec.ambiguous_clusters;

    TightGroup g;
    g.indices = cluster;
    std::sort(g.indices.begin(), g.indices.end());
    double acc = 0.0;
    for (Index i : cluster) acc += lambdas[static_cast<std::size_t>(i)];
    g.lambda = acc / static_cast<double>(cluster.size());
    dec.groups.push_back(std::move(g));
  }

  // Cross-orthogonality between distinct eigenvalue groups.
  for (std::size_t a = 0; a < dec.groups.size(); ++a) {
    for (std::size_t b = a + 1; b < dec.groups.size(); ++b) {
      for (Index i : dec.groups[a].indices) {
        for (Index j : dec.groups[b].indices) {
          const double ip = std::abs(frame.col(i).dot(frame.col(j)));
          if (ip > tol * norms(i) * norms(j)) {
            const Index lo = std::min(i, j);
            const Index hi = std::max(i, j);
            return FailureWitness{FailureWitness::Kind::cross_inner_product, lo, hi,
                                  ip / (norms(i) * norms(j))};
          }
        }
      }
    }
  }

  // Each group scaled by 1/lambda must be a projection.
  for (std::size_t gidx = 0; gidx < dec.groups.size(); ++gidx) {
    TightGroup& g = dec.groups[gidx];
    const MatrixX<Scalar> p = columns_operator(frame, g.indices) / Scalar(g.lambda);
    const double res = spectral_norm(MatrixX<Scalar>(p * p - p));
    if (res > tol)
      return FailureWitness{FailureWitness::Kind::non_tight_group, static_cast<Index>(gidx), -1,
                            res};
    g.span_dim = static_cast<Index>(std::llround(std::real(Scalar(p.trace()))));
  }

  dec.min_bound = dec.groups.front().lambda;
  return dec;
}

struct EquivalenceReport {
  bool decomposes = false;
  double c_sigma = 0.0;
  double c_epsilon = 0.0;
  double c_a = 0.0;
  bool constants_at_one = false;  // all constants <= 1 + 1e-8
  bool consistent = false;        // the two characterizations agree
};

// Orthogonal sum of tight frames <=> every unconditional constant is 1.
template <class Scalar>
EquivalenceReport unconditional_equivalence_check(const MatrixX<Scalar>& frame,
                                                  Index exact_limit = 16, double tol = 1e-8,
                                                  double cluster_tol = 1e-8) {
  EquivalenceReport out;
  out.decomposes = std::holds_alternative<TightDecomposition>(decompose(frame, tol, cluster_tol));
  const auto rep = exact_report(frame, exact_limit);
  out.c_sigma = rep.c_sigma;
  out.c_epsilon = rep.c_epsilon;
  out.c_a = rep.c_a;
  out.constants_at_one =
      rep.c_sigma <= 1.0 + 1e-8 && rep.c_epsilon <= 1.0 + 1e-8 && rep.c_a <= 1.0 + 1e-8;
  out.consistent = (out.decomposes == out.constants_at_one);
  return out;
}

template <class Scalar>
struct SymmetrizationTest {
  bool psd = false;
  bool parallel = false;
  Scalar lambda = Scalar(0);  // <y,x>/||x||^2, meaningful when parallel
  double min_eig = 0.0;
};

// x y^adj + y x^adj is PSD only when y is a nonnegative multiple of x (up to
// the real part for complex scalars); this reports both sides.
template <class Scalar>
SymmetrizationTest<Scalar> symmetrization_psd_test(const VectorX<Scalar>& x,
                                                   const VectorX<Scalar>& y, double tol = 1e-10) {
  if (x.size() != y.size() || x.size() == 0)
    throw ValidationError("symmetrization_psd_test requires two vectors of equal positive length");
  const double xn = x.norm();
  const double yn = y.norm();
  if (xn == 0.0 || yn == 0.0)
    throw ValidationError("symmetrization_psd_test requires nonzero vectors");

  const MatrixX<Scalar> m = x * y.adjoint() + y * x.adjoint();
  SymmetrizationTest<Scalar> out;
  out.min_eig = min_eigenvalue(m);
  out.psd = out.min_eig >= -tol * (2.0 * xn * yn);
  out.lambda = x.dot(y) / Scalar(xn * xn);
  out.parallel = (y - out.lambda * x).norm() <= tol * yn;
  return out;
}

struct GroupSpec {
  Index span_dim = 1;
  Index vector_count = 1;
  double tight_bound = 1.0;
};

// Seeded generator for orthogonal sums of tight frames: each group is a
// random tight frame for its own coordinate block, scaled to its bound, and
// a global Haar rotation afterwards hides the block structure so round trips
// through decompose() are non-trivial.
template <class Scalar>
MatrixX<Scalar> build_orthogonal_tight_sum(const std::vector<GroupSpec>& specs,
                                           std::uint64_t seed) {
  if (specs.empty()) throw ValidationError("build_orthogonal_tight_sum: no groups given");
  Index d = 0, n = 0;
  for (const GroupSpec& g : specs) {
    if (g.span_dim < 1) throw ValidationError("build_orthogonal_tight_sum: span_dim must be >= 1");
    if (g.vector_count < g.span_dim)
      throw ValidationError(
          "build_orthogonal_tight_sum: vector_count must be >= span_dim for a spanning tight "
          "group");
    if (!(g.tight_bound > 0.0))
      throw ValidationError("build_orthogonal_tight_sum: tight_bound must be positive");
    d += g.span_dim;
    n += g.vector_count;
  }

  SplitMix64 rng(seed);
  MatrixX<Scalar> frame = MatrixX<Scalar>::Zero(d, n);
  Index row = 0, col = 0;
  for (const GroupSpec& g : specs) {
    MatrixX<Scalar> block;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const MatrixX<Scalar> raw = random_gaussian_matrix<Scalar>(g.span_dim, g.vector_count, rng);
      if (frame_bounds(raw).rank == g.span_dim) {
        block = canonical_tight(raw);
        break;
      }
    }
    if (block.size() == 0)
      throw NumericalError("build_orthogonal_tight_sum: failed to draw a spanning group");
    frame.block(row, col, g.span_dim, g.vector_count) =
        std::sqrt(g.tight_bound) * block;
    row += g.span_dim;
    col += g.vector_count;
  }
  return haar_rotation<Scalar>(d, rng) * frame;
}

}  // namespace framelab
