#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decomplab/norms.hpp"
#include "decomplab/numkernel.hpp"

namespace dlab {

namespace detail {
class ProjectionCache;
}

/// Finite-dimensional subspace of R^N given by a basis (columns).
class Subspace {
 public:
  /// Throws DegenerateDecompositionError unless the columns are independent.
  explicit Subspace(Matrix basis, double tol = kDefaultRankTol);
  const Matrix& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  int coordDim() const { return static_cast<int>(basis_.rows()); }

 private:
  Matrix basis_;
};

struct ValidationReport {
  bool total = false;
  bool minimal = false;
  /// The tail spans a complement of the ambient space in R^N.
  bool tailComplementary = false;
  int rankAll = 0;
  int ambientDim = 0;
  std::vector<int> dims;
  std::vector<int> rankWithout;  // rank of all bases except X_n
  std::string message;
  bool valid() const { return total && minimal && tailComplementary; }
};

/// Ordered list of subspaces X_1..X_L of the coordinate space R^N, modelling
/// a decomposition of the ambient space span(X_1..X_L).
///
/// The tail T is a complement of the ambient space in R^N. Every coordinate
/// projection vanishes on T, so T stands for the directions that only the
/// closure of the far subspaces reaches. Without an explicit tail, T is the
/// Euclidean orthogonal complement of the ambient space.
///
/// Indices n, m, k are 1-based throughout.
class Decomposition {
 public:
  Decomposition(std::vector<Subspace> spaces, NormModel model,
                std::optional<int> ambientDim = std::nullopt,
                std::optional<Matrix> tail = std::nullopt);

  int size() const { return static_cast<int>(spaces_.size()); }
  int coordDim() const { return coordDim_; }
  /// Declared dimension of the ambient space (defaults to coordDim).
  int ambientDim() const { return ambientDim_; }
  const NormModel& model() const { return model_; }
  const Subspace& space(int n) const;
  const std::vector<Subspace>& spaces() const { return spaces_; }
  bool hasExplicitTail() const { return explicitTail_; }
  const Matrix& tail() const { return tail_; }

  /// Column offset of X_n inside basis(): sum of dims of X_1..X_{n-1}.
  int offset(int n) const;
  int totalDim() const { return offset(size() + 1); }
  /// Concatenated bases of X_first..X_last (zero columns when first > last).
  Matrix span(int first, int last) const;
  Matrix basis() const { return span(1, size()); }

  /// Same subspaces and tail with a different norm.
  Decomposition withModel(NormModel model) const;

  detail::ProjectionCache& cache() const { return *cache_; }

 private:
  std::vector<Subspace> spaces_;
  NormModel model_;
  int coordDim_ = 0;
  int ambientDim_ = 0;
  bool explicitTail_ = false;
  Matrix tail_;
  std::vector<int> offsets_;
  std::shared_ptr<detail::ProjectionCache> cache_;
};

struct EstimateOptions {
  int budget = 64;           // random candidates for lower-bound estimators
  std::uint64_t seed = 0;
  double rankTol = kDefaultRankTol;
};

/// A norm value together with whether it is exact (Euclidean models) or a
/// bound (lower bound for operator norms, upper bound for quotient norms).
struct NormValue {
  double value = 0.0;
  bool exact = true;
};

ValidationReport validate(const Decomposition& d, double tol = kDefaultRankTol);
/// Throws DegenerateDecompositionError when validate() fails.
void requireValid(const Decomposition& d);

/// Coefficients of x in the basis [basis() | tail()].
Vector coordinates(const Decomposition& d, const Vector& x);

/// p_n: range X_n, kernel the other subspaces and the tail.
Matrix coordinateProjection(const Decomposition& d, int n);
/// P_n = p_1 + ... + p_n (P_0 = 0).
Matrix partialSum(const Decomposition& d, int n);
Vector applyCoordinateProjection(const Decomposition& d, int n, const Vector& x);
Vector applyPartialSum(const Decomposition& d, int n, const Vector& x);

/// R_{m,k}: projection onto X[1,m-1] along X[k+1,L] (zero on the Euclidean
/// complement of that sum).
Matrix skippedProjection(const Decomposition& d, int m, int k);
/// Basis of the domain X[1,m-1] + X[k+1,L] of R_{m,k}.
Matrix skippedDomain(const Decomposition& d, int m, int k);

/// Operator norm of `op` restricted to span(domainBasis) in the model norm.
NormValue operatorNorm(const Decomposition& d, const Matrix& op, const Matrix& domainBasis,
                       const EstimateOptions& opts = {});
/// Operator norm restricted to the ambient space.
NormValue operatorNormOnAmbient(const Decomposition& d, const Matrix& op,
                                const EstimateOptions& opts = {});
NormValue skippedNorm(const Decomposition& d, int m, int k, const EstimateOptions& opts = {});

/// Distance from x to span(basis) in the model norm. Exact for Euclidean
/// models, an upper bound otherwise.
NormValue distanceToSpan(const Decomposition& d, const Vector& x, const Matrix& basis,
                         const EstimateOptions& opts = {});
/// Subspace divided out by q_{m,k}: X[1,m-1] + X[k+1,L] + tail. The tail
/// lies in the closure of every X[k+1, inf), so it is always included.
Matrix quotientKernel(const Decomposition& d, int m, int k);
/// ||q_{m,k}(x)|| = dist(x, quotientKernel(m, k)).
NormValue quotientNorm(const Decomposition& d, int m, int k, const Vector& x,
                       const EstimateOptions& opts = {});

struct RCell {
  int m = 0;
  int k = 0;
  double norm = 0.0;
  friend bool operator==(const RCell&, const RCell&) = default;
};

struct ConstantsReport {
  int len = 0;
  int window = 0;
  std::vector<RCell> rTable;  // every 1 <= m <= k <= len, row-major in m
  double K = 0.0;
  double KInfProxy = 0.0;
  double KInfInfProxy = 0.0;
  int kInfInfM = 0;
  int kInfInfK = 0;
  bool exact = true;

  double at(int m, int k) const;
  friend bool operator==(const ConstantsReport&, const ConstantsReport&) = default;
};

/// Default limsup window: the last ceil(L/3) indices.
int defaultWindow(int len);

/// Full table of ||R_{m,k}||. Euclidean models use principal angles
/// (||R|| = 1 / sin of the smallest angle between the two pieces); other
/// models use maximizeRatio lower bounds, sharpened by reusing witnesses:
/// the domain of R_{n,j} lies inside the domain of R_{m,k} for n<=m<=k<=j and
/// both maps agree there.
ConstantsReport constantsReport(const Decomposition& d, int window = 0,
                                const EstimateOptions& opts = {});

struct QCell {
  int m = 0;
  int k = 0;
  double norm = 0.0;
};

/// ||q_{m,k}(x)|| for every 1 <= m <= k <= L. Bounds for non-Euclidean models
/// are tightened with the containment of the subtracted subspaces.
std::vector<QCell> quotientTable(const Decomposition& d, const Vector& x,
                                 const EstimateOptions& opts = {});

struct DualSystem {
  /// X*_n as column bases of functionals (vectors of R^N acting by dot product).
  std::vector<Subspace> functionalSpaces;
  /// Row block n: the biorthogonal functionals of the basis of X_n.
  std::vector<Matrix> coefficientFunctionals;
};

DualSystem dualSystem(const Decomposition& d);

/// All coefficient functionals as rows: the predecomposition space Y.
FunctionalFamily predecompositionFamily(const Decomposition& d);

/// Y separates the points of R^N: the family has rank N. Fails exactly when
/// the tail is nontrivial, the finite counterpart of a nonzero intersection
/// of the closed tails X[n, inf).
bool predecompositionSeparates(const Decomposition& d);

/// Smallest c with ||x|| <= c ||x||_Y on X[m,L]; m = 1 covers the whole
/// ambient space. Exact for Euclidean models (infinite if Y fails to separate),
/// candidate estimate otherwise.
NormValue normingConstant(const Decomposition& d, int m, const EstimateOptions& opts = {});

/// The same decomposition in the equivalent norm x -> ||x||_Y (Euclidean models).
Decomposition renormByPredecomposition(const Decomposition& d);

/// (||q_n(x)||)_{n=1..L}.
std::vector<double> qnDecay(const Decomposition& d, const Vector& x,
                            const EstimateOptions& opts = {});

struct NormingFunctional {
  Vector functional;  // unit norm, in [X*_1 .. X*_j]
  double pairing = 0.0;
};

/// For w in X[1,k-1] and j >= k: a unit functional y in span(X*_1..X*_j) with
/// <w, y> = ||q_{1,j}(w)||. L2 model only.
NormingFunctional normingFunctional(const Decomposition& d, const Vector& w, int j);

}  // namespace dlab
