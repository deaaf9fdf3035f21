#include "decomplab/norms.hpp"

#include <cmath>
#include <sstream>

namespace dlab {

NormModel NormModel::lp(double p) {
  if (!(p >= 1.0)) throw ParameterError("Lp model requires p >= 1");
  return NormModel(Kind::Lp, p, nullptr);
}

NormModel NormModel::weighted(Matrix w) {
  requireFinite(w, "weighted norm");
  if (w.cols() == 0) throw DimensionError("weighted norm: empty weight");
  return NormModel(Kind::Weighted, 2.0, std::make_shared<const Matrix>(std::move(w)));
}

std::string NormModel::name() const {
  switch (kind_) {
    case Kind::James:
      return "james";
    case Kind::Weighted:
      return "weighted";
    case Kind::Lp:
      break;
  }
  if (std::isinf(p_)) return "l_inf";
  std::ostringstream os;
  os << "l_" << p_;
  return os.str();
}

bool operator==(const NormModel& a, const NormModel& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == NormModel::Kind::Lp) return a.p_ == b.p_;
  if (a.kind_ == NormModel::Kind::Weighted) return *a.weight_ == *b.weight_;
  return true;
}

namespace {

double lpNorm(const Vector& v, double p) {
  if (v.size() == 0) return 0.0;
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.stableNorm();
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

double conjugateExponent(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

// best[j] = largest sum of squared differences over increasing sequences
// ending at position j (0-based, j == n is the virtual zero).
struct JamesDp {
  std::vector<double> best;
  std::vector<int> prev;
  int argmax = 0;
};

JamesDp jamesDp(const Vector& v) {
  const int n = static_cast<int>(v.size());
  auto value = [&](int i) { return i < n ? v(i) : 0.0; };
  JamesDp dp;
  dp.best.assign(n + 1, 0.0);
  dp.prev.assign(n + 1, -1);
  for (int j = 0; j <= n; ++j) {
    const double vj = value(j);
    for (int i = 0; i < j; ++i) {
      const double d = vj - value(i);
      const double cand = dp.best[i] + d * d;
      if (cand > dp.best[j]) {
        dp.best[j] = cand;
        dp.prev[j] = i;
      }
    }
    if (dp.best[j] > dp.best[dp.argmax]) dp.argmax = j;
  }
  return dp;
}

}  // namespace

double jamesNorm(const Vector& v) {
  if (v.size() == 0) return 0.0;
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const JamesDp dp = jamesDp(v / scale);
  return scale * std::sqrt(dp.best[dp.argmax]);
}

std::vector<int> jamesWitness(const Vector& v) {
  const JamesDp dp = jamesDp(v);
  std::vector<int> path;
  for (int j = dp.argmax; j >= 0; j = dp.prev[j]) path.push_back(j + 1);
  return {path.rbegin(), path.rend()};
}

double jamesPathValue(const Vector& v, const std::vector<int>& indices) {
  const int n = static_cast<int>(v.size());
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < indices.size(); ++t) {
    const int a = indices[t], b = indices[t + 1];
    if (a < 1 || b > n + 1 || a >= b) throw ParameterError("jamesPathValue: indices not increasing");
    const double va = a <= n ? v(a - 1) : 0.0;
    const double vb = b <= n ? v(b - 1) : 0.0;
    acc += (vb - va) * (vb - va);
  }
  return acc;
}

double norm(const Vector& v, const NormModel& model) {
  switch (model.kind()) {
    case NormModel::Kind::Lp:
      return lpNorm(v, model.p());
    case NormModel::Kind::James:
      return jamesNorm(v);
    case NormModel::Kind::Weighted:
      if (model.weight().cols() != v.size()) throw DimensionError("weighted norm: size mismatch");
      return (model.weight() * v).stableNorm();
  }
  return 0.0;
}

double dualNormUpperBound(const Vector& y, const NormModel& model) {
  switch (model.kind()) {
    case NormModel::Kind::Lp:
      return lpNorm(y, conjugateExponent(model.p()));
    case NormModel::Kind::James: {
      Vector cum(y.size());
      double run = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) cum(i) = (run += y(i));
      return std::min(y.cwiseAbs().sum(), cum.stableNorm());
    }
    case NormModel::Kind::Weighted:
      break;
  }
  throw ModelError("dualNormUpperBound: not available for weighted models");
}

Matrix seminormYOperator(const FunctionalFamily& family) {
  const Matrix& f = family.functionals;
  if (!family.model.isEuclidean()) throw ModelError("seminormYOperator: Euclidean models only");
  if (family.model.isL2()) return pseudoInverse(f) * f;
  // Dual norm of y under x -> ||W x|| is ||pinv(W^T) y|| on range(W^T) and
  // infinite elsewhere; keep the admissible combinations of rows only.
  const Matrix& w = family.model.weight();
  if (w.cols() != f.cols()) throw DimensionError("seminormY: weight/functional size mismatch");
  const Matrix wtPinv = pseudoInverse(w.transpose());
  const Matrix rangeWt = orthonormalBasis(w.transpose());
  const Matrix leak = f.transpose() - rangeWt * (rangeWt.transpose() * f.transpose());
  Matrix admissible;
  if (leak.norm() <= 1e-12 * std::max(1.0, f.norm())) {
    admissible = Matrix::Identity(f.rows(), f.rows());
  } else {
    admissible = orthogonalComplement(leak.transpose());
    // columns of `admissible` span the null space of `leak`
  }
  const Matrix h = wtPinv * f.transpose() * admissible;
  return pseudoInverse(h).transpose() * admissible.transpose() * f;
}

double seminormY(const Vector& v, const FunctionalFamily& family) {
  const Matrix& f = family.functionals;
  if (f.rows() == 0) return 0.0;
  if (f.cols() != v.size()) throw DimensionError("seminormY: functional length != vector length");
  if (family.model.isEuclidean()) return (seminormYOperator(family) * v).stableNorm();

  double best = 0.0;
  auto consider = [&](const Vector& y) {
    const double d = dualNormUpperBound(y, family.model);
    if (d > 0) best = std::max(best, std::abs(v.dot(y)) / d);
  };
  const Eigen::Index r = f.rows();
  for (Eigen::Index i = 0; i < r; ++i) consider(f.row(i).transpose());
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i + 1; j < r; ++j) {
      consider((f.row(i) + f.row(j)).transpose());
      consider((f.row(i) - f.row(j)).transpose());
    }
  }
  // Euclidean projections of natural norming directions onto span(rows).
  const Matrix rowProj = pseudoInverse(f) * f;
  consider(rowProj * v);
  if (family.model.kind() == NormModel::Kind::James) {
    const Eigen::Index n = v.size();
    Vector diff(n), dtd(n);
    for (Eigen::Index i = 0; i < n; ++i) diff(i) = v(i) - (i + 1 < n ? v(i + 1) : 0.0);
    for (Eigen::Index i = 0; i < n; ++i) dtd(i) = diff(i) - (i > 0 ? diff(i - 1) : 0.0);
    consider(rowProj * dtd);
    // Path functional of the James witness: its dual norm is at most the
    // l2 norm of the differences along the path.
    const std::vector<int> path = jamesWitness(v);
    Vector yp = Vector::Zero(n);
    double diffSq = 0.0;
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const int a = path[t], b = path[t + 1];
      const double va = a <= n ? v(a - 1) : 0.0;
      const double vb = b <= n ? v(b - 1) : 0.0;
      const double dt = vb - va;
      diffSq += dt * dt;
      if (a <= n) yp(a - 1) -= dt;
      if (b <= n) yp(b - 1) += dt;
    }
    if (diffSq > 0) {
      const Vector leak = rowProj * yp - yp;
      if (leak.norm() <= 1e-10 * yp.norm()) {
        best = std::max(best, std::abs(v.dot(yp)) / std::sqrt(diffSq));
      }
    }
  } else {
    const double p = family.model.p();
    Vector dual(v.size());
    if (std::isinf(p)) {
      dual.setZero();
      Eigen::Index at = 0;
      v.cwiseAbs().maxCoeff(&at);
      dual(at) = v(at) >= 0 ? 1.0 : -1.0;
    } else {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        dual(i) = (v(i) >= 0 ? 1.0 : -1.0) * (p == 1.0 ? 1.0 : std::pow(a, p - 1.0));
      }
    }
    consider(rowProj * dual);
  }
  return best;
}

}  // namespace dlab
