#include "decomplab/gallery.hpp"

#include <cmath>
#include <limits>

namespace dlab {

namespace {

int intArg(const Claim& c, const char* key) {
  if (!c.args.contains(key)) throw ParameterError("claim " + c.id + ": missing argument " + key);
  return c.args.at(key).get<int>();
}

double realArg(const Claim& c, const char* key) {
  if (!c.args.contains(key)) throw ParameterError("claim " + c.id + ": missing argument " + key);
  return c.args.at(key).get<double>();
}

std::string strArg(const Claim& c, const char* key) {
  if (!c.args.contains(key)) throw ParameterError("claim " + c.id + ": missing argument " + key);
  return c.args.at(key).get<std::string>();
}

struct Measured {
  double value;
  bool exact;
};

Measured measure(const GalleryCase& gc, const Claim& c, const EstimateOptions& opts) {
  const Decomposition& d = gc.decomposition(c.args.value("decomp", gc.decompositions.front().name));
  const std::string& op = c.operation;
  const bool euclid = d.model().isEuclidean();

  if (op == "validate") return {validate(d).valid() ? 1.0 : 0.0, true};
  if (op == "vectorNorm") return {norm(gc.vector(strArg(c, "vector")), d.model()), true};
  if (op == "coordProjVectorNorm" || op == "coordProjVectorNormSq") {
    const double v = norm(applyCoordinateProjection(d, intArg(c, "n"), gc.vector(strArg(c, "vector"))),
                          d.model());
    return {op.ends_with("Sq") ? v * v : v, true};
  }
  if (op == "coordProjBasisDistance") {
    const int n = intArg(c, "n");
    const Vector p = applyCoordinateProjection(d, n, gc.vector(strArg(c, "vector")));
    return {norm(Vector(p - d.space(n).basis().col(0)), d.model()), true};
  }
  if (op == "partialSumVectorNorm" || op == "partialSumVectorNormSq") {
    const double v = norm(applyPartialSum(d, intArg(c, "n"), gc.vector(strArg(c, "vector"))),
                          d.model());
    return {op.ends_with("Sq") ? v * v : v, true};
  }
  if (op == "skippedNorm") {
    const NormValue r = skippedNorm(d, intArg(c, "m"), intArg(c, "k"), opts);
    return {r.value, r.exact};
  }
  if (op == "coordProjNorm") {
    const NormValue r = operatorNormOnAmbient(d, coordinateProjection(d, intArg(c, "n")), opts);
    return {r.value, r.exact};
  }
  if (op == "blockedPartialSumNorm") {
    Blocking b;
    b.cuts = c.args.at("cuts").get<std::vector<int>>();
    const Decomposition blocked = applyBlocking(d, b);
    const NormValue r = operatorNormOnAmbient(blocked, partialSum(blocked, intArg(c, "n")), opts);
    return {r.value, r.exact};
  }
  if (op == "quotientNorm") {
    const NormValue r = quotientNorm(d, intArg(c, "m"), intArg(c, "k"),
                                     gc.vector(strArg(c, "vector")), opts);
    return {r.value, r.exact};
  }
  if (op == "dualDirectionAngle") {
    const DualSystem sys = dualSystem(d);
    const Matrix q = orthonormalBasis(sys.functionalSpaces.at(intArg(c, "n") - 1).basis());
    Vector e = Vector::Zero(d.coordDim());
    e(intArg(c, "coordinate") - 1) = 1.0;
    return {(e - q * (q.transpose() * e)).norm(), true};
  }
  if (op == "normingConstant") {
    const NormValue r = normingConstant(d, intArg(c, "m"), opts);
    return {r.value, r.exact};
  }
  if (op == "constantK") {
    const ConstantsReport rep = constantsReport(d, 0, opts);
    return {rep.K, rep.exact};
  }
  if (op == "dualBlockingCertificate") {
    const DualBlockingResult r = dualBlocking(d, realArg(c, "eps"), opts);
    double worst = 1.0;
    for (double m : r.measured) worst = std::max(worst, m);
    return {worst, r.certified};
  }
  if (op == "greedyBlockingCertificate") {
    const GreedyBlockingResult r = greedyBlocking(d, realArg(c, "c"), realArg(c, "eps"), opts);
    if (!r.success) return {std::numeric_limits<double>::infinity(), r.certified};
    double worst = 1.0;
    for (double m : r.measured) worst = std::max(worst, m);
    return {worst, r.certified && euclid};
  }
  throw ParameterError("claim " + c.id + ": unknown operation '" + op + "'");
}

}  // namespace

ClaimResult evaluateClaim(const GalleryCase& gc, const Claim& claim, const EstimateOptions& opts,
                          std::optional<double> tolOverride) {
  ClaimResult r;
  r.claim = claim;
  const Measured m = measure(gc, claim, opts);
  r.value = m.value;
  r.exact = m.exact;
  r.tolerance = claim.tolerance;
  if (tolOverride && claim.relation != "gt") r.tolerance = *tolOverride;
  const double e = claim.expected;
  const double t = r.tolerance;
  if (claim.relation == "gt") {
    r.pass = r.value > e;
  } else if (claim.relation == "ge") {
    r.pass = r.value >= e - t;
  } else if (claim.relation == "le") {
    r.pass = r.value <= e + t;
  } else if (claim.relation == "eq") {
    r.pass = std::abs(r.value - e) <= t;
  } else if (claim.relation == "observe") {
    r.pass = true;
  } else {
    throw ParameterError("claim " + claim.id + ": unknown relation '" + claim.relation + "'");
  }
  return r;
}

std::vector<ClaimResult> evaluateClaims(const GalleryCase& gc, const EstimateOptions& opts,
                                        std::optional<double> tolOverride) {
  std::vector<ClaimResult> out;
  out.reserve(gc.claims.size());
  for (const Claim& c : gc.claims) out.push_back(evaluateClaim(gc, c, opts, tolOverride));
  return out;
}

}  // namespace dlab
