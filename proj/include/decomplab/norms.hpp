#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "decomplab/numkernel.hpp"

namespace dlab {

/// Ambient norm of the truncated sequence space.
///
/// - Lp(p), 1 <= p <= inf: the usual p-norm of the coefficients.
/// - James: sqrt of the sup over increasing index sequences of the sum of
///   squared consecutive differences, with one virtual zero coordinate after
///   the last one (the null tail of the sequence).
/// - Weighted(W): x -> ||W x||_2. Used for renormed spaces; only required to be
///   a norm on the subspace where it is evaluated.
class NormModel {
 public:
  enum class Kind { Lp, James, Weighted };

  static NormModel lp(double p);
  static NormModel l2() { return lp(2.0); }
  static NormModel linf() { return lp(std::numeric_limits<double>::infinity()); }
  static NormModel james() { return NormModel(Kind::James, 2.0, nullptr); }
  static NormModel weighted(Matrix w);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  const Matrix& weight() const { return *weight_; }

  bool isL2() const { return kind_ == Kind::Lp && p_ == 2.0; }
  /// Norm is x -> ||W x||_2 for some W (L2 or Weighted); operator norms are exact.
  bool isEuclidean() const { return isL2() || kind_ == Kind::Weighted; }
  std::string name() const;

  friend bool operator==(const NormModel& a, const NormModel& b);

 private:
  NormModel(Kind kind, double p, std::shared_ptr<const Matrix> w)
      : kind_(kind), p_(p), weight_(std::move(w)) {}
  Kind kind_;
  double p_;
  std::shared_ptr<const Matrix> weight_;
};

double norm(const Vector& v, const NormModel& model);

/// Exact James norm by dynamic programming, O(N^2).
double jamesNorm(const Vector& v);

/// Squared sum of consecutive differences along `indices` (1-based; index
/// N+1 denotes the virtual zero coordinate).
double jamesPathValue(const Vector& v, const std::vector<int>& indices);

/// An increasing 1-based index sequence achieving the James norm. Index
/// v.size()+1 is the virtual zero coordinate.
std::vector<int> jamesWitness(const Vector& v);

/// Upper bound on the dual norm of the functional y under `model`. Exact for
/// Lp (the conjugate norm). For James, min(||y||_1, ||cumsum y||_2), which
/// follows from ||x||_J >= ||x||_inf and ||x||_J >= ||(x_i - x_{i+1})_i||_2.
/// Weighted models throw ModelError (see seminormY for their exact treatment).
double dualNormUpperBound(const Vector& y, const NormModel& model);

/// Rows are coefficient functionals; `model` is the norm of the space they act on.
struct FunctionalFamily {
  Matrix functionals;
  NormModel model = NormModel::l2();
};

/// ||v||_Y = sup{|<v, y>| : y in span(rows), ||y||_* <= 1}.
/// Exact for Euclidean models; for other models a certified lower bound from
/// candidate functionals normalised by dualNormUpperBound.
double seminormY(const Vector& v, const FunctionalFamily& family);

/// For Euclidean models: a matrix S with ||v||_Y = ||S v||_2 for every v.
Matrix seminormYOperator(const FunctionalFamily& family);

}  // namespace dlab
