#include <doctest.h>

#include "decomplab/norms.hpp"
#include "decomplab/numkernel.hpp"
#include "oracles.hpp"

using namespace dlab;

TEST_CASE("lcg64 sequence is the documented recurrence") {
  Lcg64 rng(0);
  // One warm-up step from 0 gives the increment; the first draw advances again.
  const std::uint64_t a = 6364136223846793005ULL, c = 1442695040888963407ULL;
  std::uint64_t s = c;
  s = s * a + c;
  CHECK(rng.next() == s);
  Lcg64 r1(42), r2(42);
  for (int i = 0; i < 100; ++i) CHECK(r1.uniform() == r2.uniform());
  Lcg64 r3(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r3.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rank") {
  Matrix m(3, 2);
  m << 1, 2, 2, 4, 3, 6;
  CHECK(rank(m).numericalRank == 1);
  CHECK(rank(Matrix::Identity(4, 4)).numericalRank == 4);
  CHECK(rank(Matrix::Zero(3, 3)).numericalRank == 0);
  CHECK_THROWS_AS(rank(Matrix(0, 0)), DimensionError);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(rank(bad), DimensionError);
}

TEST_CASE("svd reconstructs on a matrix with clustered singular values") {
  // Regression: two-column blocks [e_{n-1}, e_{n-1} + e_n / n] with a gap.
  const int n = 40;
  Matrix b = Matrix::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    if (i % 2) {
      b(i - 1, i - 1) = 1;
    } else {
      b(i - 2, i - 1) = 1;
      b(i - 1, i - 1) = 1.0 / i;
    }
  }
  Matrix j(n, 39);
  j << b.leftCols(29), b.rightCols(10);
  const Svd f = svd(j);
  CHECK((f.u * f.s.asDiagonal() * f.v.transpose() - j).norm() < 1e-12);
  const Matrix p = pseudoInverse(j);
  CHECK((j * p * j - j).norm() < 1e-10);
}

TEST_CASE("leastSquaresProjector is an idempotent with the requested range and kernel") {
  Lcg64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const int r = 1 + static_cast<int>(rng.below(n - 1));
    const int k = static_cast<int>(rng.below(n - r + 1));
    const Matrix range = oracle::randomMatrix(rng, n, r);
    const Matrix kern = oracle::randomMatrix(rng, n, k);
    const Matrix p = leastSquaresProjector(range, kern);
    CHECK((p * p - p).norm() < 1e-8);
    CHECK((p * range - range).norm() < 1e-8);
    if (k > 0) CHECK((p * kern).norm() < 1e-8);
  }
  Matrix a(3, 1), b(3, 1);
  a << 1, 0, 0;
  b << 2, 0, 0;
  CHECK_THROWS_AS(leastSquaresProjector(a, b), DegenerateDecompositionError);
  CHECK(leastSquaresProjector(Matrix(3, 0), a).norm() == 0.0);
}

TEST_CASE("orthonormal basis and complement") {
  Lcg64 rng(5);
  const Matrix m = oracle::randomMatrix(rng, 7, 3);
  const Matrix q = orthonormalBasis(m);
  const Matrix c = orthogonalComplement(m);
  CHECK(q.cols() == 3);
  CHECK(c.cols() == 4);
  CHECK((q.transpose() * c).norm() < 1e-12);
  CHECK((c.transpose() * c - Matrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("maximizeRatio") {
  SUBCASE("l2 lower bound never exceeds the spectral norm") {
    Lcg64 rng(9);
    for (int t = 0; t < 20; ++t) {
      const Matrix op = oracle::randomMatrix(rng, 5, 5);
      const RatioEstimate e = maximizeRatio(op, NormModel::l2(), 32, t);
      CHECK(e.value <= spectralNorm(op) + 1e-12);
      CHECK(std::abs(e.witness.norm() - 1.0) < 1e-12);
      CHECK(std::abs((op * e.witness).norm() - e.value) < 1e-9);
    }
  }
  SUBCASE("zero operator") {
    const RatioEstimate e = maximizeRatio(Matrix::Zero(3, 3), NormModel::l2(), 4, 1);
    CHECK(e.zeroOperator);
    CHECK(e.value == 0.0);
  }
  SUBCASE("deterministic in the seed") {
    Lcg64 rng(2);
    const Matrix op = oracle::randomMatrix(rng, 6, 6);
    const RatioEstimate a = maximizeRatio(op, NormModel::james(), 16, 3);
    const RatioEstimate b = maximizeRatio(op, NormModel::james(), 16, 3);
    CHECK(a.value == b.value);
    CHECK(a.witness == b.witness);
  }
  CHECK_THROWS_AS(maximizeRatio(Matrix::Identity(2, 2), NormModel::l2(), 0, 0), ParameterError);
}
