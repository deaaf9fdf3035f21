#include <doctest.h>

#include "decomplab/norms.hpp"
#include "oracles.hpp"

using namespace dlab;

TEST_CASE("lp norms") {
  Vector v(3);
  v << 3, -4, 0;
  CHECK(norm(v, NormModel::l2()) == doctest::Approx(5.0));
  CHECK(norm(v, NormModel::lp(1)) == doctest::Approx(7.0));
  CHECK(norm(v, NormModel::linf()) == doctest::Approx(4.0));
  CHECK(norm(v, NormModel::lp(3)) == doctest::Approx(std::cbrt(27.0 + 64.0)));
  CHECK_THROWS_AS(NormModel::lp(0.5), ParameterError);
}

TEST_CASE("james norm matches subset enumeration") {
  Lcg64 rng(123);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.below(9));
    const Vector v = oracle::randomVector(rng, n);
    CHECK(jamesNorm(v) * jamesNorm(v) == doctest::Approx(oracle::jamesSqBrute(v)).epsilon(1e-12));
  }
}

TEST_CASE("james norm of simple vectors") {
  Vector e1 = Vector::Zero(4);
  e1(0) = 1;
  // Path 1 -> virtual zero.
  CHECK(jamesNorm(e1) == doctest::Approx(1.0));
  Vector alt(4);
  alt << 1, 0, 1, 0;
  // 1,0,1,0 and the virtual zero: three unit jumps.
  CHECK(jamesNorm(alt) == doctest::Approx(std::sqrt(3.0)));
  Vector constant = Vector::Ones(5);
  CHECK(jamesNorm(constant) == doctest::Approx(1.0));
}

TEST_CASE("james witness achieves the norm") {
  Lcg64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const Vector v = oracle::randomVector(rng, 10);
    const std::vector<int> w = jamesWitness(v);
    CHECK(std::is_sorted(w.begin(), w.end()));
    CHECK(jamesPathValue(v, w) == doctest::Approx(jamesNorm(v) * jamesNorm(v)));
  }
  CHECK_THROWS_AS(jamesPathValue(Vector::Ones(3), {2, 1}), ParameterError);
}

TEST_CASE("dual norm bounds") {
  Vector y(3);
  y << 1, -2, 2;
  CHECK(dualNormUpperBound(y, NormModel::l2()) == doctest::Approx(3.0));
  CHECK(dualNormUpperBound(y, NormModel::lp(1)) == doctest::Approx(2.0));
  CHECK(dualNormUpperBound(y, NormModel::linf()) == doctest::Approx(5.0));
  CHECK_THROWS_AS(dualNormUpperBound(y, NormModel::weighted(Matrix::Identity(3, 3))), ModelError);
  // The James bound is a valid bound: |<x,y>| <= bound * ||x||_J on random x.
  Lcg64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const Vector f = oracle::randomVector(rng, 6);
    const Vector x = oracle::randomVector(rng, 6);
    CHECK(std::abs(f.dot(x)) <= dualNormUpperBound(f, NormModel::james()) * jamesNorm(x) + 1e-12);
  }
}

TEST_CASE("seminormY") {
  SUBCASE("full family in l2 is the norm") {
    Lcg64 rng(8);
    const FunctionalFamily fam{oracle::randomMatrix(rng, 4, 4), NormModel::l2()};
    const Vector v = oracle::randomVector(rng, 4);
    CHECK(seminormY(v, fam) == doctest::Approx(v.norm()));
  }
  SUBCASE("coordinate family in l2") {
    Matrix f = Matrix::Zero(1, 3);
    f(0, 1) = 5;
    Vector v(3);
    v << 1, 2, 3;
    CHECK(seminormY(v, FunctionalFamily{f, NormModel::l2()}) == doctest::Approx(2.0));
  }
  SUBCASE("weighted norm with full family equals the weighted norm") {
    Lcg64 rng(21);
    const Matrix w = oracle::randomMatrix(rng, 4, 4);
    const FunctionalFamily fam{oracle::randomMatrix(rng, 4, 4), NormModel::weighted(w)};
    const Vector v = oracle::randomVector(rng, 4);
    CHECK(seminormY(v, fam) == doctest::Approx((w * v).norm()));
  }
  SUBCASE("james full family reaches the norm through the witness path") {
    Lcg64 rng(31);
    const FunctionalFamily fam{Matrix::Identity(8, 8), NormModel::james()};
    for (int t = 0; t < 20; ++t) {
      const Vector v = oracle::randomVector(rng, 8);
      const double s = seminormY(v, fam);
      CHECK(s <= jamesNorm(v) + 1e-12);
      CHECK(s >= jamesNorm(v) - 1e-12);
    }
  }
}
