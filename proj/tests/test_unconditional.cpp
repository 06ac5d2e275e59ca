#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "framelab/gallery.hpp"
#include "framelab/unconditional.hpp"

#include <bit>
#include <cmath>

using namespace framelab;
using C = std::complex<double>;

namespace {

RealMatrix mercedes_benz() {
  RealMatrix f(2, 3);
  f << 1.0, -0.5, -0.5, 0.0, std::sqrt(3.0) / 2.0, -std::sqrt(3.0) / 2.0;
  return f;
}

}  // namespace

TEST_CASE("relative_norm of the trivial diagonals") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const RealMatrix f = random_frame<double>(3, 6, seed);
    CHECK(relative_norm(f, RealVector(RealVector::Ones(6))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(relative_norm(f, RealVector(RealVector::Zero(6))) == 0.0);
  }
}

TEST_CASE("relative_norm is positively homogeneous in the weights") {
  const RealMatrix f = random_frame<double>(3, 5, 8);
  SplitMix64 rng(21);
  RealVector w(5);
  for (Index i = 0; i < 5; ++i) w(i) = rng.next_normal();
  CHECK(relative_norm(f, RealVector(2.5 * w)) ==
        doctest::Approx(2.5 * relative_norm(f, w)).epsilon(1e-12));
}

TEST_CASE("relative_norm against an orthonormal basis is a max over picked entries") {
  const RealMatrix f = RealMatrix::Identity(3, 3);
  CHECK(relative_norm(f, detail::mask_weights(SubsetMask{0b001}, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  RealVector w(3);
  w << 0.25, -0.75, 0.5;
  CHECK(relative_norm(f, w) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("relative_norm validates the weight length") {
  CHECK_THROWS_WITH_AS(relative_norm(simplex_frame(4), RealVector(RealVector::Ones(3))),
                       doctest::Contains("weight length 3"), ValidationError);
}

TEST_CASE("simplex subframe relative norm reaches the known witness value") {
  // For the N = 4 subframe, keeping two of the three vectors moves phi_1 by
  // at least sqrt(4/3) relative to S.
  const RealMatrix psi = simplex_subframe(4);
  const double value = relative_norm(psi, detail::mask_weights(SubsetMask{0b011}, 3));
  CHECK(value >= std::sqrt(4.0 / 3.0) - 1e-9);
  CHECK(value <= 2.0 + 1e-9);  // sqrt(B/A) = sqrt(N)
}

TEST_CASE("tight frames have every unconditional constant equal to one") {
  const auto check_tight = [](const RealMatrix& f) {
    const auto rep = exact_report(f);
    CHECK(rep.c_sigma == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.c_epsilon == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.c_a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.bound == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.mode == Mode::exact);
  };
  check_tight(RealMatrix(RealMatrix::Identity(4, 4)));
  check_tight(mercedes_benz());
  check_tight(simplex_frame(5));
  for (std::uint64_t seed : {3, 4}) check_tight(canonical_tight(random_frame<double>(3, 7, seed)));
}

TEST_CASE("exact constants of the simplex subframe clear sqrt(N)/2") {
  for (Index n : {4, 5, 6, 7, 8}) {
    const auto rep = exact_report(simplex_subframe(n));
    const double root_n = std::sqrt(static_cast<double>(n));
    CHECK(rep.c_sigma > root_n / 2.0);
    CHECK(rep.c_sigma <= rep.bound + 1e-9);  // bound = sqrt(N)
    CHECK(rep.bound == doctest::Approx(root_n).epsilon(1e-9));
    // the witness mask reproduces the reported value
    CHECK(relative_norm(simplex_subframe(n),
                        detail::mask_weights(rep.witness_sigma, n - 1)) ==
          doctest::Approx(rep.c_sigma).epsilon(1e-12));
  }
}

TEST_CASE("shift frame sign constant dominates the alternating-sum ratio") {
  for (Index n : {4, 6, 8, 10}) {
    const double nn = static_cast<double>(n);
    const auto rep = exact_report(shift_frame(n));
    CHECK(rep.c_epsilon >= std::sqrt((9.0 * nn - 4.0) / (nn + 4.0)) - 1e-9);
    CHECK(rep.c_epsilon <= rep.bound + 1e-9);
    const double cosv = std::cos(M_PI / (nn + 1.0));
    CHECK(rep.bound == doctest::Approx(std::sqrt((1.25 + cosv) / (1.25 - cosv))).epsilon(1e-10));

    // this family attains the sign bound exactly, with the alternating
    // pattern as the enumeration's lex-smallest witness
    CHECK(rep.c_epsilon == doctest::Approx(rep.bound).epsilon(1e-12));
    const auto alt = alternating_witness(n);
    CHECK(rep.witness_signs == alt.signs);
  }
}

TEST_CASE("constant chain inequalities hold for exact reports") {
  for (std::uint64_t seed : {5, 6, 7, 8, 9}) {
    const RealMatrix f = random_frame<double>(3, 7, seed);
    const auto rep = exact_report(f);
    CHECK(rep.c_sigma >= 1.0 - 1e-10);
    CHECK(rep.c_epsilon >= rep.c_sigma - 1e-10);
    CHECK(rep.c_epsilon <= 2.0 * rep.c_sigma + 1e-10);
    CHECK(rep.c_a == rep.c_epsilon);  // vertex attainment, exact by construction
    CHECK(rep.slack == doctest::Approx(rep.bound - rep.c_a));
  }
}

TEST_CASE("complex frames run through the same machinery") {
  const ComplexMatrix f = random_frame<C>(3, 6, 31);
  const auto rep = exact_report(f);
  CHECK(rep.c_sigma >= 1.0 - 1e-10);
  CHECK(rep.c_epsilon >= rep.c_sigma - 1e-10);
  CHECK(rep.c_a <= rep.bound + 1e-9);

  const ComplexMatrix t = canonical_tight(f);
  const auto trep = exact_report(t);
  CHECK(trep.c_a == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("random box points never beat the vertex value") {
  for (std::uint64_t seed : {2, 3}) {
    const RealMatrix f = random_frame<double>(3, 6, seed);
    const auto ctx = make_context(f);
    const double ca = box_constant(f);
    SplitMix64 rng(seed * 97 + 1);
    RealVector w(6);
    for (int trial = 0; trial < 200; ++trial) {
      for (Index i = 0; i < 6; ++i) w(i) = 2.0 * rng.next_double() - 1.0;
      CHECK(detail::relative_norm_with(ctx, w) <= ca + 1e-10);
    }
  }
}

TEST_CASE("exact witnesses achieve the reported constants") {
  const RealMatrix f = random_frame<double>(4, 8, 77);
  const auto rep = exact_report(f);
  CHECK(relative_norm(f, detail::mask_weights(rep.witness_sigma, 8)) ==
        doctest::Approx(rep.c_sigma).epsilon(1e-12));
  CHECK(relative_norm(f, detail::sign_weights(rep.witness_signs)) ==
        doctest::Approx(rep.c_epsilon).epsilon(1e-12));
  CHECK(rep.witness_signs[0] == 1);

  // witness_x is a unit vector on which the winning operator attains its norm
  const auto ctx = make_context(f);
  const MatrixX<double> op = detail::weighted_operator(ctx, detail::sign_weights(rep.witness_signs));
  CHECK(rep.witness_x.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((op * rep.witness_x).norm() == doctest::Approx(rep.c_a).epsilon(1e-10));
}

TEST_CASE("exact enumeration breaks ties toward the lex-smallest witness") {
  // orthonormal basis: every nonempty subset attains the same norm 1
  const auto sub = subset_constant_exact(RealMatrix(RealMatrix::Identity(3, 3)));
  CHECK(sub.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sub.mask.bits == 0b001ULL);  // {0} is lex-smallest among nonempty subsets

  const auto sign = sign_constant_exact(RealMatrix(RealMatrix::Identity(3, 3)));
  CHECK(sign.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sign.signs == std::vector<int>{1, 1, 1});  // all-plus is lex-smallest
}

TEST_CASE("deterministic enumeration is independent of the worker split") {
  // ties on purpose: value depends only on the low three bits
  const auto eval = [](std::uint64_t c) { return static_cast<double>(std::popcount(c & 7ULL)); };
  const auto tie = [](std::uint64_t a, std::uint64_t b) {
    return subset_lex_less(SubsetMask{a}, SubsetMask{b});
  };
  const auto ref = detail::enumerate_best(1ULL << 12, eval, tie, 1);
  for (unsigned workers : {2u, 3u, 5u, 8u}) {
    const auto got = detail::enumerate_best(1ULL << 12, eval, tie, workers);
    CHECK(got.first == ref.first);
    CHECK(got.second == ref.second);
  }
  CHECK(ref.second == 7ULL);  // {0,1,2} is the lex-smallest argmax
}

TEST_CASE("exact mode refuses oversized frames and points at the heuristic") {
  const RealMatrix f = random_frame<double>(3, 18, 5);
  CHECK_THROWS_WITH_AS(subset_constant_exact(f), doctest::Contains("heuristic"), ValidationError);
  CHECK_THROWS_AS(sign_constant_exact(f), ValidationError);
  CHECK_THROWS_AS(exact_report(f), ValidationError);
  CHECK_NOTHROW(subset_constant_exact(random_frame<double>(3, 17, 5), 17));
}

TEST_CASE("verify_bound accepts valid frames and flags tightness") {
  // the shift family attains the sign bound exactly (alternating pattern),
  // so the sign slack is zero up to roundoff while the subset constant keeps
  // a genuinely strict gap
  const auto loose = verify_bound(shift_frame(6));
  CHECK(loose.ok);
  CHECK(loose.strict);
  CHECK(std::abs(loose.slack) <= 1e-12);
  CHECK(loose.bound - loose.report.c_sigma > 0.5);

  const auto tight = verify_bound(RealMatrix(RealMatrix::Identity(3, 3)));
  CHECK(tight.ok);
  CHECK(!tight.strict);
}

TEST_CASE("verify_bound rejects a corrupted report") {
  const RealMatrix f = shift_frame(5);
  auto rep = exact_report(f);
  rep.c_a = rep.bound + 1.0;  // forged value
  const auto check = verify_bound(rep, frame_bounds(f));
  CHECK(!check.ok);
}

TEST_CASE("psd_square_order separates the squared ordering") {
  const RealMatrix id = RealMatrix::Identity(2, 2);
  CHECK(psd_square_order(id, SubsetMask{0b01}, 1.0));
  CHECK(!psd_square_order(id, SubsetMask{0b01}, 0.5));
  CHECK_THROWS_AS(psd_square_order(id, SubsetMask{0b01}, 0.0), ValidationError);

  for (std::uint64_t seed : {41, 42}) {
    const RealMatrix f = random_frame<double>(3, 6, seed);
    const auto sub = subset_constant_exact(f);
    const double csq = sub.value * sub.value;
    for (std::uint64_t bits = 0; bits < (1ULL << 6); ++bits)
      CHECK(psd_square_order(f, SubsetMask{bits}, csq + 1e-6));
    const double at_witness = relative_norm(f, detail::mask_weights(sub.mask, 6));
    CHECK(!psd_square_order(f, sub.mask, at_witness * at_witness - 1e-3));
  }
}

TEST_CASE("equality_case_check on a non-tight frame stays strict") {
  RealMatrix f(2, 3);  // {e1, e1, e2}: S = diag(2, 1), bound sqrt(2)
  f << 1, 1, 0, 0, 0, 1;
  const auto diag = equality_case_check(f, SubsetMask{0b011}, RealVector(RealVector::Unit(2, 0)));
  CHECK(diag.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(diag.bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(!diag.is_equality);
  CHECK(!diag.frame_tight);
}

TEST_CASE("equality_case_check recognizes the tight equality case") {
  const RealMatrix id = RealMatrix::Identity(2, 2);
  const auto diag = equality_case_check(id, SubsetMask{0b01}, RealVector(RealVector::Unit(2, 0)));
  CHECK(diag.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(diag.is_equality);
  CHECK(diag.frame_tight);
  CHECK(diag.removed_part_orthogonal);
}

TEST_CASE("equality_case_check reproduces the subframe witness ratio") {
  const RealMatrix psi = simplex_subframe(4);
  const RealVector phi1 = simplex_frame(4).col(0);
  const auto diag = equality_case_check(psi, SubsetMask{0b011}, phi1);
  CHECK(diag.ratio == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-10));
  CHECK(diag.bound == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(!diag.is_equality);  // strict: ratio < sqrt(N) always for this family
}

TEST_CASE("equality_case_check rejects x with Sx = 0") {
  RealMatrix f(2, 1);
  f << 1, 0;
  CHECK_THROWS_WITH_AS(equality_case_check(f, SubsetMask{0b1}, RealVector(RealVector::Unit(2, 1))),
                       doctest::Contains("Sx = 0"), ValidationError);
}

TEST_CASE("heuristic reports are deterministic and sound") {
  const RealMatrix f = random_frame<double>(4, 12, 13);
  const auto a = heuristic_report(f, 40, 7);
  const auto b = heuristic_report(f, 40, 7);
  CHECK(a.c_sigma == b.c_sigma);
  CHECK(a.c_epsilon == b.c_epsilon);
  CHECK(a.witness_sigma.bits == b.witness_sigma.bits);
  CHECK(a.witness_signs == b.witness_signs);
  CHECK(a.mode == Mode::heuristic);

  const auto exact = exact_report(f);
  CHECK(a.c_sigma <= exact.c_sigma + 1e-12);   // heuristic is a lower bound
  CHECK(a.c_epsilon <= exact.c_epsilon + 1e-12);
  CHECK(a.c_a <= a.bound + 1e-9);

  // chain safety holds for every seed, found-optimal or not
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto rep = heuristic_report(f, 3, seed);
    CHECK(rep.c_sigma >= 1.0 - 1e-10);
    CHECK(rep.c_epsilon >= rep.c_sigma - 1e-10);
    CHECK(rep.c_epsilon <= 2.0 * rep.c_sigma + 1e-10);
    CHECK(rep.c_a == rep.c_epsilon);
    CHECK(relative_norm(f, detail::mask_weights(rep.witness_sigma, 12)) ==
          doctest::Approx(rep.c_sigma).epsilon(1e-12));
    CHECK(relative_norm(f, detail::sign_weights(rep.witness_signs)) ==
          doctest::Approx(rep.c_epsilon).epsilon(1e-12));
  }
}

TEST_CASE("heuristic search finds the exact optimum on small frames") {
  for (std::uint64_t seed : {61, 62, 63}) {
    const RealMatrix f = random_frame<double>(3, 8, seed);
    const auto exact = exact_report(f);
    const auto heur = heuristic_report(f, 50, 5);
    CHECK(heur.c_sigma == doctest::Approx(exact.c_sigma).epsilon(1e-9));
    CHECK(heur.c_epsilon == doctest::Approx(exact.c_epsilon).epsilon(1e-9));
  }
}

TEST_CASE("heuristic clears sqrt(N)/2 on the N = 20 simplex subframe") {
  const RealMatrix psi = simplex_subframe(20);
  const auto rep = heuristic_report(psi, 200, 1);
  CHECK(rep.c_sigma > std::sqrt(20.0) / 2.0);
  CHECK(rep.c_a <= rep.bound + 1e-9);
  CHECK(rep.mode == Mode::heuristic);
}

TEST_CASE("heuristic rejects a negative budget") {
  const RealMatrix f = random_frame<double>(2, 4, 3);
  CHECK_THROWS_AS(heuristic_report(f, -1, 1), ValidationError);
}
