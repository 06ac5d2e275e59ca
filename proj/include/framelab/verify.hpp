#pragma once

#include "framelab/unconditional.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace framelab {

// Property suite behind the `verify` CLI command. The report parameter is
// injectable so a deliberately corrupted report can exercise the failure
// path; the theorems make honest failures unreachable from valid input.

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

template <class Scalar>
std::vector<PropertyResult> verify_properties(const MatrixX<Scalar>& frame,
                                              const UnconditionalReport<Scalar>& report,
                                              std::uint64_t seed = 1) {
  std::vector<PropertyResult> out;
  const auto ctx = make_context(frame);
  const FrameBounds fb = ctx.bounds;
  const Index n = frame.cols();
  const MatrixX<Scalar> s = frame_operator(frame);
  SplitMix64 rng(seed);

  {
    // A ||Px||^2 <= <Sx, x> <= B ||x||^2 on sampled vectors, P = projection
    // onto the span (P = S S^+).
    PropertyResult r{"frame_inequality", true, ""};
    const MatrixX<Scalar> proj = s * ctx.pinv;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const VectorX<Scalar> x = random_unit_vector<Scalar>(frame.rows(), rng);
      const double quad = std::real(Scalar(x.dot(s * x)));
      const double pn2 = (proj * x).squaredNorm();
      worst = std::max({worst, fb.lower * pn2 - quad, quad - fb.upper});
    }
    r.pass = worst <= 1e-9 * fb.upper;
    r.detail = "max violation " + detail::fmt(worst) + " over 100 samples";
    out.push_back(r);
  }

  {
    PropertyResult r{"unconditional_bound", true, ""};
    r.pass = report.c_a <= report.bound + 1e-9;
    r.detail = "c_a = " + detail::fmt(report.c_a) + ", sqrt(B/A) = " + detail::fmt(report.bound);
    out.push_back(r);
  }

  {
    PropertyResult r{"constant_chain", true, ""};
    const double slack = 1e-10;
    r.pass = report.c_sigma >= 1.0 - slack && report.c_epsilon >= report.c_sigma - slack &&
             report.c_epsilon <= 2.0 * report.c_sigma + slack &&
             report.c_a >= report.c_epsilon - slack && report.c_a <= 2.0 * report.c_epsilon + slack;
    r.detail = "c_sigma = " + detail::fmt(report.c_sigma) +
               ", c_epsilon = " + detail::fmt(report.c_epsilon) +
               ", c_a = " + detail::fmt(report.c_a);
    out.push_back(r);
  }

  {
    // S_sigma + S_sigma^c = S, exhaustive for small N, sampled otherwise.
    PropertyResult r{"subset_complement", true, ""};
    const double scale = spectral_norm(s);
    double worst = 0.0;
    const auto check = [&](SubsetMask m) {
      const MatrixX<Scalar> sum =
          subset_operator(frame, m) + subset_operator(frame, m.complement(n));
      worst = std::max(worst, spectral_norm(MatrixX<Scalar>(sum - s)));
    };
    if (n <= 10) {
      for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) check(SubsetMask{bits});
    } else {
      const std::uint64_t all = SubsetMask::full(n).bits;
      for (int k = 0; k < 100; ++k) check(SubsetMask{rng.next_u64() & all});
    }
    r.pass = worst <= 1e-12 * scale;
    r.detail = "max deviation " + detail::fmt(worst) + " (scale " + detail::fmt(scale) + ")";
    out.push_back(r);
  }

  {
    // C = c_sigma^2 + slack dominates S_sigma^2 against S^2 on sampled masks.
    PropertyResult r{"psd_square_order", true, ""};
    const std::uint64_t all = SubsetMask::full(n).bits;
    const double c = report.c_sigma * report.c_sigma + 1e-6;
    bool ok = true;
    for (int k = 0; k < 32 && ok; ++k)
      ok = psd_square_order(frame, SubsetMask{rng.next_u64() & all}, c);
    ok = ok && psd_square_order(frame, report.witness_sigma, c);
    r.pass = ok;
    r.detail = "C = " + detail::fmt(c);
    out.push_back(r);
  }

  return out;
}

}  // namespace framelab
