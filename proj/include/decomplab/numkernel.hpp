#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "decomplab/errors.hpp"

namespace dlab {

/// Dense column-major real matrix. All linear maps of the library
/// (coordinate projections, partial sums, skipped projections) live here.
using Matrix = Eigen::MatrixXd;
/// Coefficient sequence over the canonical basis e_1..e_N.
using Vector = Eigen::VectorXd;

class NormModel;

inline constexpr double kDefaultRankTol = 1e-9;

/// Throws DimensionError if any entry is NaN or infinite.
void requireFinite(const Matrix& m, const char* what);

struct RankReport {
  int numericalRank = 0;
  std::vector<double> singularValues;  // descending
  double tolerance = kDefaultRankTol;
};

struct Svd {
  Matrix u;  // left singular vectors (thin unless full requested)
  Vector s;  // descending
  Matrix v;  // right singular vectors (thin unless full requested)
};

/// Singular value decomposition (LAPACK divide and conquer). `full` returns
/// square U and V.
Svd svd(const Matrix& m, bool full = false);

/// Numerical rank: count of singular values above tol * sigma_max.
RankReport rank(const Matrix& m, double tol = kDefaultRankTol);

/// Singular values in descending order.
std::vector<double> singularValues(const Matrix& m);

/// Largest singular value (exact operator norm in the Euclidean model).
double spectralNorm(const Matrix& m);

/// Orthonormal basis of the column space (numerical rank at `tol`).
Matrix orthonormalBasis(const Matrix& m, double tol = kDefaultRankTol);

/// Orthonormal basis of the orthogonal complement of the column space.
Matrix orthogonalComplement(const Matrix& m, double tol = kDefaultRankTol);

/// Moore-Penrose pseudo-inverse via SVD.
Matrix pseudoInverse(const Matrix& m, double tol = kDefaultRankTol);

/// Matrix of the projection with range span(rangeBasis) and kernel
/// span(kernelBasis), on R^N where N = rows. The two spans must form a direct
/// sum; on the orthogonal complement of that sum the projection is zero.
/// Either basis may have zero columns.
Matrix leastSquaresProjector(const Matrix& rangeBasis, const Matrix& kernelBasis,
                             double tol = kDefaultRankTol);

/// Explicit 64-bit linear congruential generator:
///   state <- state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
/// Each draw advances once and returns the top 53 bits scaled to [0, 1).
/// Construction stores the seed verbatim and performs one warm-up advance.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) { next(); }
  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return (next() >> 11) % n; }

 private:
  std::uint64_t state_;
};

struct RatioEstimate {
  double value = 0.0;
  Vector witness;             // ambient vector achieving `value`
  bool zeroOperator = false;  // no candidate had a nonzero image
  int candidatesTried = 0;
};

/// Lower bound on the operator norm of `op` restricted to span(domainBasis),
/// measured with `model` on both sides. Candidates, in coefficient space of
/// the domain basis: unit vectors, all pairwise sums and differences,
/// `budget` samples uniform on [-1,1]^d drawn from Lcg64(seed), and any
/// `extra` ambient vectors (which must lie in the domain).
RatioEstimate maximizeRatioOn(const Matrix& op, const Matrix& domainBasis, const NormModel& model,
                              int budget, std::uint64_t seed,
                              std::span<const Vector> extra = {});

/// maximizeRatioOn with the identity as domain basis.
RatioEstimate maximizeRatio(const Matrix& op, const NormModel& model, int budget,
                            std::uint64_t seed);

}  // namespace dlab
