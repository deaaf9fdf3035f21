#include "decomplab/numkernel.hpp"

#include <algorithm>
#include <cmath>

#include "decomplab/norms.hpp"

#include <lapacke.h>

namespace dlab {

void requireFinite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw DimensionError(std::string(what) + ": non-finite entry");
}

Svd svd(const Matrix& m, bool full) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  Svd out;
  if (k == 0) {
    out.u = full ? Matrix(Matrix::Identity(rows, rows)) : Matrix(rows, 0);
    out.v = full ? Matrix(Matrix::Identity(cols, cols)) : Matrix(cols, 0);
    return out;
  }
  requireFinite(m, "svd");
  Matrix a = m;
  out.s.resize(k);
  out.u.resize(rows, full ? rows : k);
  out.v.resize(cols, full ? cols : k);
  Matrix vt(full ? cols : k, cols);
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, full ? 'A' : 'S', rows, cols, a.data(), rows,
                     out.s.data(), out.u.data(), rows, vt.data(), static_cast<lapack_int>(vt.rows()));
  if (info != 0) throw DimensionError("svd: LAPACK dgesdd failed to converge");
  out.v = vt.transpose();
  return out;
}

std::vector<double> singularValues(const Matrix& m) {
  if (m.size() == 0) return {};
  requireFinite(m, "singularValues");
  Matrix a = m;
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  std::vector<double> out(std::min(rows, cols));
  const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows,
                                         out.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw DimensionError("singularValues: LAPACK dgesdd failed to converge");
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

RankReport rank(const Matrix& m, double tol) {
  if (m.size() == 0) throw DimensionError("rank: empty matrix");
  if (!(tol > 0)) throw ParameterError("rank: tolerance must be positive");
  requireFinite(m, "rank");
  RankReport r;
  r.tolerance = tol;
  r.singularValues = singularValues(m);
  const double top = r.singularValues.front();
  if (top > 0) {
    r.numericalRank = static_cast<int>(
        std::count_if(r.singularValues.begin(), r.singularValues.end(),
                      [&](double s) { return s > tol * top; }));
  }
  return r;
}

double spectralNorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  requireFinite(m, "spectralNorm");
  return singularValues(m).front();
}

Matrix orthonormalBasis(const Matrix& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  const Svd d = svd(m);
  const Vector& s = d.s;
  int r = 0;
  if (s.size() > 0 && s(0) > 0) {
    while (r < s.size() && s(r) > tol * s(0)) ++r;
  }
  return d.u.leftCols(r);
}

Matrix orthogonalComplement(const Matrix& m, double tol) {
  const Eigen::Index n = m.rows();
  if (m.cols() == 0) return Matrix::Identity(n, n);
  const Svd d = svd(m, true);
  const Vector& s = d.s;
  int r = 0;
  if (s.size() > 0 && s(0) > 0) {
    while (r < s.size() && s(r) > tol * s(0)) ++r;
  }
  return d.u.rightCols(n - r);
}

Matrix pseudoInverse(const Matrix& m, double tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  const Svd d = svd(m);
  const Vector& s = d.s;
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) inv(i) = 1.0 / s(i);
  }
  return d.v * inv.asDiagonal() * d.u.transpose();
}

Matrix leastSquaresProjector(const Matrix& rangeBasis, const Matrix& kernelBasis, double tol) {
  const Eigen::Index n = rangeBasis.rows();
  if (kernelBasis.rows() != n && kernelBasis.cols() > 0) {
    throw DimensionError("leastSquaresProjector: range and kernel live in different spaces");
  }
  requireFinite(rangeBasis, "leastSquaresProjector range");
  requireFinite(kernelBasis, "leastSquaresProjector kernel");
  const Eigen::Index r = rangeBasis.cols();
  if (r == 0) return Matrix::Zero(n, n);
  Matrix joint(n, r + kernelBasis.cols());
  joint << rangeBasis, kernelBasis;
  if (rank(joint, tol).numericalRank != joint.cols()) {
    throw DegenerateDecompositionError(
        "leastSquaresProjector: range and kernel do not form a direct sum");
  }
  const Matrix coords = pseudoInverse(joint, tol);
  return rangeBasis * coords.topRows(r);
}

namespace {

struct RatioSearch {
  const Matrix& image;   // op * domainBasis
  const Matrix& domain;  // domainBasis
  const NormModel& model;
  RatioEstimate best;
  bool anyNonzero = false;

  void consider(const Vector& num, const Vector& den) {
    ++best.candidatesTried;
    const double d = norm(den, model);
    if (!(d > 0)) return;
    const double n = norm(num, model);
    if (n > 0) anyNonzero = true;
    const double ratio = n / d;
    if (ratio > best.value || best.witness.size() == 0) {
      best.value = ratio;
      best.witness = den / d;
    }
  }
};

}  // namespace

RatioEstimate maximizeRatioOn(const Matrix& op, const Matrix& domainBasis, const NormModel& model,
                              int budget, std::uint64_t seed, std::span<const Vector> extra) {
  if (budget < 1) throw ParameterError("maximizeRatio: budget must be >= 1");
  if (op.cols() != domainBasis.rows()) throw DimensionError("maximizeRatio: shape mismatch");
  requireFinite(op, "maximizeRatio");
  const Matrix image = op * domainBasis;
  RatioSearch s{image, domainBasis, model, {}, false};
  const Eigen::Index d = domainBasis.cols();
  for (Eigen::Index i = 0; i < d; ++i) s.consider(image.col(i), domainBasis.col(i));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      s.consider(image.col(i) + image.col(j), domainBasis.col(i) + domainBasis.col(j));
      s.consider(image.col(i) - image.col(j), domainBasis.col(i) - domainBasis.col(j));
    }
  }
  Lcg64 rng(seed);
  Vector c(d);
  for (int b = 0; b < budget && d > 0; ++b) {
    for (Eigen::Index i = 0; i < d; ++i) c(i) = rng.uniform(-1.0, 1.0);
    s.consider(image * c, domainBasis * c);
  }
  for (const Vector& x : extra) {
    if (x.size() != op.cols()) throw DimensionError("maximizeRatio: extra candidate size");
    s.consider(op * x, x);
  }
  if (!s.anyNonzero) {
    s.best.value = 0.0;
    s.best.zeroOperator = true;
    s.best.witness = Vector::Zero(op.cols());
  }
  return s.best;
}

RatioEstimate maximizeRatio(const Matrix& op, const NormModel& model, int budget,
                            std::uint64_t seed) {
  if (op.rows() != op.cols()) throw DimensionError("maximizeRatio: operator must be square");
  return maximizeRatioOn(op, Matrix::Identity(op.cols(), op.cols()), model, budget, seed);
}

}  // namespace dlab
