#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decomplab/decomposition.hpp"

namespace dlab {

/// Cut points m(1) < m(2) < ... < m(r) = len; m(0) = 0 is implicit.
/// Block i is X[m(i-1)+1, m(i)].
struct Blocking {
  std::vector<int> cuts;
  friend bool operator==(const Blocking&, const Blocking&) = default;
};

/// Throws ParameterError unless the cuts are strictly increasing, positive and
/// end at len.
void checkBlocking(const Blocking& b, int len);
Blocking identityBlocking(int len);
Decomposition applyBlocking(const Decomposition& d, const Blocking& b);

struct EpsilonNet {
  std::vector<Vector> points;  // unit vectors in the model norm
  double epsilon = 0.0;
  bool certified = false;
  std::string log;
};

/// Net of the unit sphere of span(basis). Dimension <= 3 under the L2 model:
/// grid of step eps/2 on the surface of the coefficient cube, radially
/// projected (certified, given an orthonormal basis). Otherwise: basis
/// vectors, their negatives and `randomCount` seeded uniform directions.
EpsilonNet sphereNet(const Matrix& basis, const NormModel& model, double eps, std::uint64_t seed,
                     int randomCount = 256);

struct GreedyBlockingResult {
  bool success = false;
  Blocking blocking;            // cuts found so far (complete on success)
  double claimedBound = 0.0;    // c / (1 - 3 eps c)
  std::vector<double> measured; // ||R_{m(i)+1, m(i+1)}|| for consecutive cuts
  bool certified = true;        // every net certified and every norm exact
  // Failure report.
  Vector witness;
  double pairing = 0.0;  // sup of |<witness, y>| over the unit ball of Y
  int failedAt = 0;      // cut m(k) whose sphere contains the witness
  std::string message;
};

/// Greedy construction of a blocking whose skipped projections are bounded by
/// c / (1 - 3 eps c). Fails when some net point w of X[1, m(k)] has
/// ||w||_Y <= 1/c - eps.
GreedyBlockingResult greedyBlocking(const Decomposition& d, double c, double eps,
                                    const EstimateOptions& opts = {}, int netSize = 256);

struct DualBlockingResult {
  Blocking blocking;
  double claimedBound = 0.0;    // (1 + eps) / (1 - eps)
  std::vector<double> measured; // dual ||R_{m(i)+1, m(i+1)}||
  bool certified = true;
};

/// The X*_n as a decomposition of the functional space (L2 model).
Decomposition dualDecomposition(const Decomposition& d);

/// Blocking whose dual system has skipped norms <= (1+eps)/(1-eps). L2 only.
DualBlockingResult dualBlocking(const Decomposition& d, double eps,
                                const EstimateOptions& opts = {}, int netSize = 256);

struct MazurResult {
  Decomposition decomposition;
  std::vector<double> stepBounds;  // 1 + eps_n for each emitted X_{n+1}, n >= 1
  std::vector<double> measuredR;   // ||R_{n+1}|| for n >= 1
  int unreachedDim = 0;
  std::vector<int> skippedCandidates;  // 0-based indices contributing v = 0
};

/// Inductive construction from a candidate sequence. W_n is the set of
/// least-squares dual functionals of X[1, n+1]; each X_{n+1} is spanned by the
/// part of the next candidate annihilated by W_{n-1}. L2 only.
/// Throws DegenerateDecompositionError when no candidate is nonzero.
MazurResult mazurConstruct(const std::vector<Vector>& candidates, const NormModel& model,
                           const std::vector<double>& epsSchedule);

struct ConvStep {
  int cut = 0;         // m(k+1)
  Vector corrector;    // w_{k+1} in X[m(k)+1, m(k+1)]
  double error = 0.0;  // ||x - (P_{m(k)} x + w_{k+1})||
  double bound = 0.0;  // 2 * 2^-k
  double partialNorm = 0.0;  // ||P_{m(k)} x||
};

/// Steps k = 1.. of the convergent approximation scheme with m(1) = 1, until
/// the cut reaches the last index.
std::vector<ConvStep> convApproximation(const Decomposition& d, const Vector& x,
                                        const EstimateOptions& opts = {});

/// Decomposition spanned by grouped vectors of a biorthogonal system. The
/// grouping cuts refer to vector indices. Throws BiorthogonalityError if some
/// |<x_i, f_j> - delta_ij| exceeds tol.
Decomposition dddFromBiorthogonal(const std::vector<Vector>& vectors,
                                  const std::vector<Vector>& functionals, const Blocking& grouping,
                                  const NormModel& model = NormModel::l2(), double tol = 1e-8);

}  // namespace dlab
