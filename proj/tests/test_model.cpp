#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparse/model.hpp"
#include "sparse/rng.hpp"

#include <cmath>

using namespace sparse;

namespace {

// Random complex quadratic model plus real s-sparse x, kept independent of
// the generators under test elsewhere.
QuadraticModel random_quadratic(Index N, Index n, Rng& rng) {
  QuadraticModel m;
  m.offsets = CVec(N);
  m.linear_left = CMat(N, n);
  m.linear_right = CMat(N, n);
  for (Index i = 0; i < N; ++i) {
    m.offsets(i) = rng.cgaussian();
    for (Index j = 0; j < n; ++j) {
      m.linear_left(i, j) = rng.cgaussian();
      m.linear_right(i, j) = rng.cgaussian();
    }
  }
  for (Index i = 0; i < N; ++i) {
    CMat Q(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) Q(r, c) = rng.cgaussian();
    m.quadratics.push_back(std::move(Q));
  }
  return m;
}

CVec random_real_vector(Index n, Rng& rng) {
  CVec x(n);
  for (Index i = 0; i < n; ++i) x(i) = rng.gaussian();
  return x;
}

CMat random_hermitian(Index d, Rng& rng) {
  CMat A(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) A(i, j) = rng.cgaussian();
  return 0.5 * (A + A.adjoint());
}

}  // namespace

TEST_CASE("lift: scalar hand expansion") {
  QuadraticModel m;
  m.offsets = CVec::Zero(1);
  m.linear_left = CMat::Constant(1, 1, Complex(2.0, 0.0));
  m.linear_right = CMat::Zero(1, 1);
  m.quadratics = {CMat::Constant(1, 1, Complex(3.0, 0.0))};
  CVec x = CVec::Constant(1, Complex(1.0, 0.0));
  m.y = m.evaluate(x);
  REQUIRE(m.y(0) == Complex(5.0, 0.0));  // 0 + 2*1 + 0 + 3*1^2

  const LiftedProblem lifted = lift(m);
  CHECK(lifted.phis[0](0, 0) == Complex(0.0, 0.0));
  CHECK(lifted.phis[0](0, 1) == Complex(2.0, 0.0));
  CHECK(lifted.phis[0](1, 0) == Complex(0.0, 0.0));
  CHECK(lifted.phis[0](1, 1) == Complex(3.0, 0.0));

  const CMat X = lift_point(x);
  CHECK(std::abs(apply_lifted(lifted, X)(0) - Complex(5.0, 0.0)) < 1e-15);
}

TEST_CASE("lift: zero model maps every X to zero") {
  QuadraticModel m;
  m.offsets = CVec::Zero(2);
  m.linear_left = CMat::Zero(2, 3);
  m.linear_right = CMat::Zero(2, 3);
  m.quadratics = {CMat::Zero(3, 3), CMat::Zero(3, 3)};
  m.y = CVec::Zero(2);
  const LiftedProblem lifted = lift(m);

  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const CMat X = random_hermitian(4, rng);
    CHECK(apply_lifted(lifted, X).norm() == 0.0);
  }
  CHECK(lifted.dictionary.norm() == 0.0);
}

TEST_CASE("lift: trace form matches direct evaluation to 1e-12") {
  Rng rng(42);
  QuadraticModel m = random_quadratic(4, 3, rng);
  const CVec x = random_real_vector(3, rng);
  m.y = m.evaluate(x);
  const LiftedProblem lifted = lift(m);
  const CMat X = lift_point(x);
  const CVec via_trace = apply_lifted(lifted, X);
  CHECK((via_trace - m.y).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + m.y.norm()));
}

TEST_CASE("lift: dimension mismatch names the offending index") {
  Rng rng(3);
  QuadraticModel m = random_quadratic(3, 2, rng);
  m.y = CVec::Zero(3);
  m.quadratics[1] = CMat::Zero(2, 3);
  try {
    lift(m);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("apply_lifted: identity sensing matrices give trace of X") {
  const Index d = 4;  // n = 3
  std::vector<CMat> phis(5, CMat::Identity(d, d));
  const LiftedProblem p = LiftedProblem::from_phis(phis, CVec::Zero(5));

  const CVec at_identity = apply_lifted(p, CMat::Identity(d, d));
  for (Index i = 0; i < 5; ++i) CHECK(at_identity(i) == Complex(d, 0.0));

  const CVec at_zero = apply_lifted(p, CMat::Zero(d, d));
  CHECK(at_zero.norm() == 0.0);
}

TEST_CASE("apply_lifted: matches brute-force double loop and D vec(X)") {
  Rng rng(11);
  QuadraticModel m = random_quadratic(4, 3, rng);
  m.y = CVec::Zero(4);
  const LiftedProblem p = lift(m);
  const CMat X = random_hermitian(4, rng);

  const CVec fast = apply_lifted(p, X);
  for (Index i = 0; i < 4; ++i) {
    Complex slow(0.0, 0.0);
    for (Index j = 0; j < 4; ++j)
      for (Index k = 0; k < 4; ++k) slow += p.phis[i](j, k) * X(k, j);
    CHECK(std::abs(fast(i) - slow) < 1e-12 * (1.0 + std::abs(slow)));
  }

  const CVec via_dict = p.dictionary * vec_column_major(X);
  CHECK((fast - via_dict).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + fast.norm()));
}

TEST_CASE("apply_lifted: dimension mismatch throws") {
  std::vector<CMat> phis(2, CMat::Identity(3, 3));
  const LiftedProblem p = LiftedProblem::from_phis(phis, CVec::Zero(2));
  CHECK_THROWS_AS(apply_lifted(p, CMat::Identity(4, 4)), DimensionError);
}

TEST_CASE("rank1_decompose: exact lift inverts") {
  CVec x(3);
  x << Complex(0.0, 0.0), Complex(3.0, 0.0), Complex(0.0, 0.0);
  const CMat X = lift_point(x);
  const Rank1Decomposition dec = rank1_decompose(X, 1e-9);
  CHECK((dec.x - x).norm() < 1e-12);
  CHECK(dec.quality < 1e-14);
  CHECK_FALSE(dec.used_fallback);
}

TEST_CASE("rank1_decompose: identity falls back to first column") {
  const CMat X = CMat::Identity(3, 3);
  const Rank1Decomposition dec = rank1_decompose(X, 1e-9);
  CHECK(dec.quality == doctest::Approx(1.0));
  CHECK(dec.used_fallback);
  CHECK(dec.x.norm() == 0.0);  // first column of identity scaled: (0, 0)
  CHECK(dec.x.size() == 2);
}

TEST_CASE("rank1_decompose: small Hermitian perturbation stays close") {
  Rng rng(5);
  const CVec x = random_real_vector(4, rng);
  CMat X = lift_point(x);
  CMat noise = random_hermitian(5, rng);
  noise *= 1e-6 / noise.norm();
  X += noise;

  // The perturbation can push an eigenvalue to about -1e-6, so the PSD
  // tolerance must sit above that.
  const Rank1Decomposition dec = rank1_decompose(X, 1e-5);
  CHECK((dec.x - x).norm() < 1e-4);
  CHECK(dec.quality < 1e-5);
}

TEST_CASE("rank1_decompose: not-PSD and degenerate errors") {
  CMat neg = CMat::Identity(3, 3);
  neg(2, 2) = -1.0;
  CHECK_THROWS_AS(rank1_decompose(neg, 1e-9), NotPsdError);

  CMat hollow = CMat::Zero(3, 3);
  hollow(1, 1) = 1.0;  // PSD, but X(0,0) = 0 and eigenvector leading entry 0
  CHECK_THROWS_AS(rank1_decompose(hollow, 1e-9), DegenerateError);

  CMat skew = CMat::Identity(3, 3);
  skew(0, 1) = Complex(0.0, 1.0);
  skew(1, 0) = Complex(0.0, 1.0);  // not the conjugate: not Hermitian
  CHECK_THROWS_AS(rank1_decompose(skew, 1e-9), ValidationError);
}

TEST_CASE("property: lift/trace consistency on random models") {
  Rng rng(100);
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + static_cast<Index>(rng.uniform_below(5));
    const Index N = 1 + static_cast<Index>(rng.uniform_below(6));
    QuadraticModel m = random_quadratic(N, n, rng);
    const CVec x = random_real_vector(n, rng);
    m.y = m.evaluate(x);
    const LiftedProblem lifted = lift(m);
    const CVec via_trace = apply_lifted(lifted, lift_point(x));
    CHECK((via_trace - m.y).norm() < 1e-10 * (1.0 + m.y.norm()));
  }
}

TEST_CASE("property: vectorization consistency for random Hermitian X") {
  Rng rng(101);
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + static_cast<Index>(rng.uniform_below(4));
    QuadraticModel m = random_quadratic(3, n, rng);
    m.y = CVec::Zero(3);
    const LiftedProblem p = lift(m);
    const CMat X = random_hermitian(n + 1, rng);
    const CVec a = apply_lifted(p, X);
    const CVec b = p.dictionary * vec_column_major(X);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + a.norm()));
  }
}

TEST_CASE("property: rank1_decompose inverts lift_point") {
  Rng rng(102);
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + static_cast<Index>(rng.uniform_below(6));
    CVec x(n);
    for (Index i = 0; i < n; ++i) x(i) = rng.cgaussian();
    const Rank1Decomposition dec = rank1_decompose(lift_point(x), 1e-9);
    CHECK((dec.x - x).norm() < 1e-10 * (1.0 + x.norm()));
  }
}

TEST_CASE("property: linear models embed with exact trace form") {
  Rng rng(103);
  LinearModel lin;
  lin.sensing = CMat(3, 4);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j) lin.sensing(i, j) = rng.cgaussian();
  const CVec x = random_real_vector(4, rng);
  lin.y = lin.sensing * x;

  const QuadraticModel quad = to_quadratic(lin);
  const CVec direct = quad.evaluate(x);
  CHECK((direct - lin.y).cwiseAbs().maxCoeff() < 1e-13 * (1.0 + lin.y.norm()));

  const LiftedProblem p = lift(quad);
  const CVec via_trace = apply_lifted(p, lift_point(x));
  CHECK((via_trace - lin.y).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + lin.y.norm()));
}

TEST_CASE("hermitian deviation of an exact lift is zero") {
  Rng rng(104);
  CVec x(3);
  for (Index i = 0; i < 3; ++i) x(i) = rng.cgaussian();
  CHECK(hermitian_deviation(lift_point(x)) < 1e-12);
}
