#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "decomplab/gallery.hpp"
#include "oracles.hpp"

using namespace dlab;

TEST_CASE("james order is a permutation") {
  for (int k = 3; k <= 12; ++k) {
    std::vector<int> o = jamesOrder(k);
    std::sort(o.begin(), o.end());
    std::vector<int> id(o.size());
    std::iota(id.begin(), id.end(), 1);
    CHECK(o == id);
  }
  CHECK_THROWS_AS(jamesOrder(2), ParameterError);
}

TEST_CASE("james example vector and norms") {
  const GalleryCase gc = jamesPermutation(4);
  const Vector& x = gc.vector("x");
  CHECK(jamesNorm(x) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(jamesNorm(x) * jamesNorm(x) == doctest::Approx(oracle::jamesSqBrute(x)).epsilon(1e-12));
  CHECK(validate(gc.decomposition("singletons")).valid());
  CHECK(validate(gc.decomposition("grouped")).valid());
}

TEST_CASE("badddd claims against oracles") {
  const GalleryCase gc = badddd(20);
  const Decomposition& d = gc.primary();
  CHECK(d.ambientDim() == 19);
  // Direct least-squares oracle for the norm of P_n x.
  for (int n = 1; n <= 19; ++n) {
    Matrix kern(20, d.totalDim() - d.offset(n + 1) + 1);
    kern << d.span(n + 1, d.size()), d.tail();
    const Matrix p = leastSquaresProjector(d.span(1, n), kern);
    CHECK((p * gc.vector("x")).norm() > n);
  }
}

TEST_CASE("every claim passes on small cases") {
  for (const auto& [name, n] : std::vector<std::pair<std::string, int>>{
           {"badddd", 12}, {"sbd-not-fdd", 12}, {"james", 4}, {"permuted-reversal", 6},
           {"james-permuted", 3}}) {
    const GalleryCase gc = galleryCase(name, n);
    CHECK_FALSE(gc.claims.empty());
    for (const ClaimResult& r : evaluateClaims(gc)) {
      INFO(name << " " << r.claim.id << " value " << r.value);
      CHECK(r.pass);
    }
  }
  CHECK_THROWS_AS(galleryCase("nope", 3), ParameterError);
}

TEST_CASE("tolerance override tightens claims") {
  const GalleryCase gc = sbdNotFdd(8);
  Claim c = gc.claims.back();
  c.expected += 1e-3;
  CHECK(evaluateClaim(gc, c).pass == false);
  CHECK(evaluateClaim(gc, c, {}, 1e-2).pass);
}

TEST_CASE("quotient norms in the james example are exact representatives") {
  const GalleryCase gc = jamesPermutation(5);
  for (const Claim& c : gc.claims) {
    if (c.operation != "quotientNorm") continue;
    const ClaimResult r = evaluateClaim(gc, c);
    CHECK(r.value == doctest::Approx(c.expected).epsilon(1e-12));
  }
}
