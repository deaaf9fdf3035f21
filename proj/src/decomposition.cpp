#include "decomplab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <set>

namespace dlab {

namespace detail {

/// Memo of projection matrices shared by copies of a Decomposition. A missing
/// entry is built outside the lock by the first caller; concurrent callers
/// wait on the same future.
class ProjectionCache {
 public:
  template <class Build>
  const Matrix& get(const std::string& key, Build&& build) {
    std::shared_future<Matrix> fut;
    std::promise<Matrix> promise;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        fut = promise.get_future().share();
        entries_.emplace(key, fut);
        owner = true;
      } else {
        fut = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(build());
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    // The map keeps the shared state alive, so the reference stays valid.
    return fut.get();
  }

  const ValidationReport& validation(const Decomposition& d) {
    std::call_once(validOnce_, [&] { report_ = validate(d); });
    return report_;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_future<Matrix>> entries_;
  std::once_flag validOnce_;
  ValidationReport report_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Subspace / Decomposition

Subspace::Subspace(Matrix basis, double tol) : basis_(std::move(basis)) {
  requireFinite(basis_, "Subspace");
  if (basis_.rows() == 0) throw DimensionError("Subspace: zero-dimensional coordinate space");
  if (basis_.cols() == 0) throw DimensionError("Subspace: empty basis");
  if (rank(basis_, tol).numericalRank != basis_.cols()) {
    throw DegenerateDecompositionError("Subspace: basis columns are dependent");
  }
}

Decomposition::Decomposition(std::vector<Subspace> spaces, NormModel model,
                             std::optional<int> ambientDim, std::optional<Matrix> tail)
    : spaces_(std::move(spaces)),
      model_(std::move(model)),
      cache_(std::make_shared<detail::ProjectionCache>()) {
  if (spaces_.empty()) throw DimensionError("Decomposition: no subspaces");
  coordDim_ = spaces_.front().coordDim();
  offsets_.push_back(0);
  for (const Subspace& s : spaces_) {
    if (s.coordDim() != coordDim_) throw DimensionError("Decomposition: mixed coordinate dimensions");
    offsets_.push_back(offsets_.back() + s.dim());
  }
  ambientDim_ = ambientDim.value_or(coordDim_);
  if (ambientDim_ < 1 || ambientDim_ > coordDim_) {
    throw DimensionError("Decomposition: ambientDim out of range");
  }
  if (model_.kind() == NormModel::Kind::Weighted && model_.weight().cols() != coordDim_) {
    throw DimensionError("Decomposition: weighted norm size mismatch");
  }
  if (tail) {
    if (tail->cols() > 0 && tail->rows() != coordDim_) {
      throw DimensionError("Decomposition: tail has wrong coordinate dimension");
    }
    requireFinite(*tail, "Decomposition tail");
    explicitTail_ = true;
    tail_ = tail->cols() > 0 ? *tail : Matrix(coordDim_, 0);
  } else {
    tail_ = orthogonalComplement(basis());
  }
}

const Subspace& Decomposition::space(int n) const {
  if (n < 1 || n > size()) throw DimensionError("Decomposition: index out of range");
  return spaces_[n - 1];
}

int Decomposition::offset(int n) const {
  if (n < 1 || n > size() + 1) throw DimensionError("Decomposition: offset index out of range");
  return offsets_[n - 1];
}

Matrix Decomposition::span(int first, int last) const {
  first = std::max(first, 1);
  last = std::min(last, size());
  if (first > last) return Matrix(coordDim_, 0);
  Matrix out(coordDim_, offset(last + 1) - offset(first));
  for (int n = first; n <= last; ++n) {
    out.middleCols(offset(n) - offset(first), spaces_[n - 1].dim()) = spaces_[n - 1].basis();
  }
  return out;
}

Decomposition Decomposition::withModel(NormModel model) const {
  return Decomposition(spaces_, std::move(model), ambientDim_,
                       explicitTail_ ? std::optional<Matrix>(tail_) : std::nullopt);
}

// ---------------------------------------------------------------------------
// Validation and coordinates

ValidationReport validate(const Decomposition& d, double tol) {
  ValidationReport r;
  r.ambientDim = d.ambientDim();
  const Matrix all = d.basis();
  for (const Subspace& s : d.spaces()) r.dims.push_back(s.dim());
  r.rankAll = rank(all, tol).numericalRank;
  r.total = r.rankAll == d.ambientDim();
  // Minimality for every n is equivalent to the sum being direct.
  if (r.rankAll == all.cols()) {
    r.minimal = true;
    for (int dim : r.dims) r.rankWithout.push_back(r.rankAll - dim);
  } else {
    r.minimal = true;
    for (int n = 1; n <= d.size(); ++n) {
      Matrix rest(d.coordDim(), all.cols() - d.space(n).dim());
      rest << d.span(1, n - 1), d.span(n + 1, d.size());
      const int rw = rest.cols() > 0 ? rank(rest, tol).numericalRank : 0;
      r.rankWithout.push_back(rw);
      if (rw + d.space(n).dim() != r.rankAll) r.minimal = false;
    }
  }
  const Matrix& t = d.tail();
  if (r.rankAll + t.cols() == d.coordDim()) {
    Matrix joint(d.coordDim(), all.cols() + t.cols());
    joint << all, t;
    r.tailComplementary = rank(joint, tol).numericalRank == d.coordDim();
  }
  if (!r.total) {
    r.message = "not total: rank " + std::to_string(r.rankAll) + " < ambientDim " +
                std::to_string(r.ambientDim);
  } else if (!r.minimal) {
    r.message = "not minimal: some X_n meets the span of the others";
  } else if (!r.tailComplementary) {
    r.message = "tail is not a complement of the ambient space";
  } else {
    r.message = "ok";
  }
  return r;
}

void requireValid(const Decomposition& d) {
  const ValidationReport& r = d.cache().validation(d);
  if (!r.valid()) throw DegenerateDecompositionError("invalid decomposition: " + r.message);
}

namespace {

void checkIndex(const Decomposition& d, int n, const char* what) {
  if (n < 1 || n > d.size()) throw DimensionError(std::string(what) + ": index out of range");
}

void checkVector(const Decomposition& d, const Vector& x, const char* what) {
  if (x.size() != d.coordDim()) throw DimensionError(std::string(what) + ": vector length mismatch");
  requireFinite(x, what);
}

const Matrix& inverseCoordinates(const Decomposition& d) {
  requireValid(d);
  return d.cache().get("inverse", [&] {
    Matrix joint(d.coordDim(), d.totalDim() + d.tail().cols());
    joint << d.basis(), d.tail();
    return Matrix(joint.fullPivLu().inverse());
  });
}

}  // namespace

Vector coordinates(const Decomposition& d, const Vector& x) {
  checkVector(d, x, "coordinates");
  return inverseCoordinates(d) * x;
}

Matrix coordinateProjection(const Decomposition& d, int n) {
  checkIndex(d, n, "coordinateProjection");
  return d.cache().get("p" + std::to_string(n), [&] {
    const Matrix& inv = inverseCoordinates(d);
    return Matrix(d.space(n).basis() * inv.middleRows(d.offset(n), d.space(n).dim()));
  });
}

Matrix partialSum(const Decomposition& d, int n) {
  if (n < 0 || n > d.size()) throw DimensionError("partialSum: index out of range");
  if (n == 0) return Matrix::Zero(d.coordDim(), d.coordDim());
  return d.cache().get("P" + std::to_string(n), [&] {
    const Matrix& inv = inverseCoordinates(d);
    return Matrix(d.span(1, n) * inv.topRows(d.offset(n + 1)));
  });
}

Vector applyCoordinateProjection(const Decomposition& d, int n, const Vector& x) {
  checkIndex(d, n, "applyCoordinateProjection");
  checkVector(d, x, "applyCoordinateProjection");
  const Matrix& inv = inverseCoordinates(d);
  return d.space(n).basis() * (inv.middleRows(d.offset(n), d.space(n).dim()) * x);
}

Vector applyPartialSum(const Decomposition& d, int n, const Vector& x) {
  if (n < 0 || n > d.size()) throw DimensionError("applyPartialSum: index out of range");
  checkVector(d, x, "applyPartialSum");
  if (n == 0) return Vector::Zero(d.coordDim());
  const Matrix& inv = inverseCoordinates(d);
  return d.span(1, n) * (inv.topRows(d.offset(n + 1)) * x);
}

namespace {

void checkPair(const Decomposition& d, int m, int k, const char* what) {
  if (m < 1 || k < m || k > d.size()) throw DimensionError(std::string(what) + ": need 1 <= m <= k <= L");
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(std::max(a.rows(), b.rows()), a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

Matrix euclidWeight(const Decomposition& d) {
  if (d.model().isL2()) return Matrix::Identity(d.coordDim(), d.coordDim());
  return d.model().weight();
}

}  // namespace

Matrix skippedProjection(const Decomposition& d, int m, int k) {
  checkPair(d, m, k, "skippedProjection");
  requireValid(d);
  return leastSquaresProjector(d.span(1, m - 1), d.span(k + 1, d.size()));
}

Matrix skippedDomain(const Decomposition& d, int m, int k) {
  checkPair(d, m, k, "skippedDomain");
  return hcat(d.span(1, m - 1), d.span(k + 1, d.size()));
}

Matrix quotientKernel(const Decomposition& d, int m, int k) {
  return hcat(skippedDomain(d, m, k), d.tail());
}

// ---------------------------------------------------------------------------
// Operator norms

NormValue operatorNorm(const Decomposition& d, const Matrix& op, const Matrix& domainBasis,
                       const EstimateOptions& opts) {
  if (domainBasis.cols() == 0) return {0.0, d.model().isEuclidean()};
  if (d.model().isEuclidean()) {
    const Matrix w = euclidWeight(d);
    const Matrix den = w * domainBasis;
    return {spectralNorm(w * op * domainBasis * pseudoInverse(den, opts.rankTol)), true};
  }
  const RatioEstimate est = maximizeRatioOn(op, domainBasis, d.model(), opts.budget, opts.seed);
  return {est.value, false};
}

NormValue operatorNormOnAmbient(const Decomposition& d, const Matrix& op,
                                const EstimateOptions& opts) {
  return operatorNorm(d, op, d.basis(), opts);
}

NormValue skippedNorm(const Decomposition& d, int m, int k, const EstimateOptions& opts) {
  return operatorNorm(d, skippedProjection(d, m, k), skippedDomain(d, m, k), opts);
}

// ---------------------------------------------------------------------------
// Distances

namespace {

// Rows on which `basis` is supported, provided span(basis) is exactly the span
// of those coordinate vectors.
std::optional<std::vector<int>> coordinateSupport(const Matrix& basis) {
  std::vector<int> rows;
  for (Eigen::Index i = 0; i < basis.rows(); ++i) {
    if (basis.row(i).cwiseAbs().maxCoeff() > 0.0) rows.push_back(static_cast<int>(i));
  }
  if (static_cast<Eigen::Index>(rows.size()) != basis.cols()) return std::nullopt;
  return rows;
}

// Residual candidates for a coordinate subspace: free coordinates copy the
// nearest fixed value on one side, falling back to the other side.
std::vector<Vector> holdFills(const Vector& x, const std::vector<int>& freeRows) {
  const Eigen::Index n = x.size();
  std::vector<bool> isFree(n, false);
  for (int r : freeRows) isFree[r] = true;
  std::vector<Vector> out;
  for (int direction : {+1, -1}) {
    Vector r = x;
    std::optional<double> held;
    auto visit = [&](Eigen::Index i) {
      if (!isFree[i]) {
        held = x(i);
      } else if (held) {
        r(i) = *held;
      } else {
        r(i) = std::numeric_limits<double>::quiet_NaN();
      }
    };
    if (direction > 0) {
      for (Eigen::Index i = 0; i < n; ++i) visit(i);
    } else {
      for (Eigen::Index i = n - 1; i >= 0; --i) visit(i);
    }
    // Fill what is left with the nearest value from the other side.
    held.reset();
    if (direction > 0) {
      for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (std::isnan(r(i))) {
          r(i) = held.value_or(0.0);
        } else {
          held = r(i);
        }
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::isnan(r(i))) {
          r(i) = held.value_or(0.0);
        } else {
          held = r(i);
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

constexpr int kRefineMaxCoords = 128;
constexpr int kRefineMaxEvals = 400;

}  // namespace

NormValue distanceToSpan(const Decomposition& d, const Vector& x, const Matrix& basis,
                         const EstimateOptions& opts) {
  checkVector(d, x, "distanceToSpan");
  const NormModel& model = d.model();
  if (basis.cols() == 0) return {norm(x, model), true};
  if (model.isEuclidean()) {
    const Matrix w = euclidWeight(d);
    const Matrix ws = w * basis;
    const Vector wx = w * x;
    const Vector c = ws.completeOrthogonalDecomposition().solve(wx);
    return {(wx - ws * c).stableNorm(), true};
  }

  // Upper bound: evaluate the exact model norm of explicit residuals.
  const Vector c2 = basis.completeOrthogonalDecomposition().solve(x);
  Vector bestResidual = x - basis * c2;
  double best = norm(bestResidual, model);
  auto consider = [&](const Vector& r) {
    const double v = norm(r, model);
    if (v < best) {
      best = v;
      bestResidual = r;
    }
  };
  consider(x);
  if (auto support = coordinateSupport(basis); support && rank(basis).numericalRank == basis.cols()) {
    for (const Vector& r : holdFills(x, *support)) consider(r);
  }
  if (x.size() <= kRefineMaxCoords) {
    const Matrix q = orthonormalBasis(basis, opts.rankTol);
    double step = std::max(best, 1e-12) / 4.0;
    int evals = 0;
    while (evals < kRefineMaxEvals && step > 1e-10 * std::max(best, 1e-300)) {
      bool improved = false;
      for (Eigen::Index j = 0; j < q.cols() && evals < kRefineMaxEvals; ++j) {
        for (double sgn : {+1.0, -1.0}) {
          const Vector trial = bestResidual + sgn * step * q.col(j);
          ++evals;
          const double v = norm(trial, model);
          if (v < best) {
            best = v;
            bestResidual = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step /= 2.0;
    }
  }
  return {best, false};
}

NormValue quotientNorm(const Decomposition& d, int m, int k, const Vector& x,
                       const EstimateOptions& opts) {
  checkPair(d, m, k, "quotientNorm");
  requireValid(d);
  return distanceToSpan(d, x, quotientKernel(d, m, k), opts);
}

// ---------------------------------------------------------------------------
// Tables

namespace {

/// Orthonormal prefix bases of X[1, .] and suffix bases of X[., L] (+ tail),
/// used to evaluate Euclidean skipped norms and quotient norms for all pairs.
struct L2Pairs {
  const Decomposition& d;
  Matrix prefixQ;   // N x D, first off(m) columns span X[1, m-1]
  Matrix suffixQ;   // N x (D + t), first v columns span X[k+1, L] (+ tail first)
  Matrix cross;     // prefixQ^T suffixQ
  bool withTail;

  L2Pairs(const Decomposition& dec, bool includeTail) : d(dec), withTail(includeTail) {
    const int L = d.size();
    const Matrix all = d.basis();
    Eigen::HouseholderQR<Matrix> qr(all);
    prefixQ = qr.householderQ() * Matrix::Identity(d.coordDim(), all.cols());
    const int t = includeTail ? static_cast<int>(d.tail().cols()) : 0;
    Matrix rev(d.coordDim(), all.cols() + t);
    if (t > 0) rev.leftCols(t) = d.tail();
    int col = t;
    for (int n = L; n >= 1; --n) {
      rev.middleCols(col, d.space(n).dim()) = d.space(n).basis();
      col += d.space(n).dim();
    }
    Eigen::HouseholderQR<Matrix> qr2(rev);
    suffixQ = qr2.householderQ() * Matrix::Identity(d.coordDim(), rev.cols());
    cross = prefixQ.transpose() * suffixQ;
  }

  int u(int m) const { return d.offset(m); }
  int v(int k) const {
    const int t = withTail ? static_cast<int>(d.tail().cols()) : 0;
    return t + d.totalDim() - d.offset(k + 1);
  }

  double skippedNorm(int m, int k) const {
    const int a = u(m), b = v(k);
    if (a == 0) return 0.0;
    if (b == 0) return 1.0;
    const auto c = cross.topLeftCorner(a, b);
    Matrix g = a <= b ? Matrix(Matrix::Identity(a, a) - c * c.transpose())
                      : Matrix(Matrix::Identity(b, b) - c.transpose() * c);
    const double lam = Eigen::SelfAdjointEigenSolver<Matrix>(g, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
    if (!(lam > 0)) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(lam);
  }

  double distance(int m, int k, const Vector& x, const Vector& px, const Vector& sx) const {
    const int a = u(m), b = v(k);
    Vector r = x;
    if (a > 0 && b == 0) {
      r -= prefixQ.leftCols(a) * px.head(a);
    } else if (a == 0 && b > 0) {
      r -= suffixQ.leftCols(b) * sx.head(b);
    } else if (a > 0 && b > 0) {
      const auto c = cross.topLeftCorner(a, b);
      Vector ca, cb;
      if (b <= a) {
        const Matrix s = Matrix::Identity(b, b) - c.transpose() * c;
        cb = s.ldlt().solve(sx.head(b) - c.transpose() * px.head(a));
        ca = px.head(a) - c * cb;
      } else {
        const Matrix s = Matrix::Identity(a, a) - c * c.transpose();
        ca = s.ldlt().solve(px.head(a) - c * sx.head(b));
        cb = sx.head(b) - c.transpose() * ca;
      }
      r -= prefixQ.leftCols(a) * ca + suffixQ.leftCols(b) * cb;
    }
    return r.stableNorm();
  }
};

}  // namespace

int defaultWindow(int len) { return std::max(1, (len + 2) / 3); }

double ConstantsReport::at(int m, int k) const {
  for (const RCell& c : rTable) {
    if (c.m == m && c.k == k) return c.norm;
  }
  throw DimensionError("ConstantsReport: no such cell");
}

ConstantsReport constantsReport(const Decomposition& d, int window, const EstimateOptions& opts) {
  requireValid(d);
  const int L = d.size();
  if (window <= 0) window = defaultWindow(L);
  if (window > L) throw ParameterError("constantsReport: window exceeds length");

  ConstantsReport rep;
  rep.len = L;
  rep.window = window;
  rep.exact = d.model().isEuclidean();
  std::vector<std::vector<double>> val(L + 2, std::vector<double>(L + 2, 0.0));

  if (d.model().isL2()) {
    const L2Pairs pairs(d, false);
    for (int m = 1; m <= L; ++m)
      for (int k = m; k <= L; ++k) val[m][k] = pairs.skippedNorm(m, k);
  } else if (d.model().isEuclidean()) {
    for (int m = 1; m <= L; ++m)
      for (int k = m; k <= L; ++k) val[m][k] = skippedNorm(d, m, k, opts).value;
  } else {
    for (int m = 1; m <= L; ++m) {
      for (int k = L; k >= m; --k) {
        double v = skippedNorm(d, m, k, opts).value;
        if (m > 1) v = std::max(v, val[m - 1][k]);
        if (k < L) v = std::max(v, val[m][k + 1]);
        val[m][k] = v;
      }
    }
  }
  for (int m = 1; m <= L; ++m)
    for (int k = m; k <= L; ++k) rep.rTable.push_back({m, k, val[m][k]});

  for (int n = 1; n <= L; ++n) {
    rep.K = std::max(rep.K, val[n][n]);
    if (n > L - window) rep.KInfProxy = std::max(rep.KInfProxy, val[n][n]);
  }
  rep.kInfInfM = L - window + 1;
  rep.kInfInfK = std::max(rep.kInfInfM, L - 1);
  rep.KInfInfProxy = val[rep.kInfInfM][rep.kInfInfK];
  return rep;
}

std::vector<QCell> quotientTable(const Decomposition& d, const Vector& x,
                                 const EstimateOptions& opts) {
  requireValid(d);
  checkVector(d, x, "quotientTable");
  const int L = d.size();
  std::vector<std::vector<double>> val(L + 2, std::vector<double>(L + 2, 0.0));
  if (d.model().isL2()) {
    const L2Pairs pairs(d, true);
    const Vector px = pairs.prefixQ.transpose() * x;
    const Vector sx = pairs.suffixQ.transpose() * x;
    for (int m = 1; m <= L; ++m)
      for (int k = m; k <= L; ++k) val[m][k] = pairs.distance(m, k, x, px, sx);
  } else {
    const bool exact = d.model().isEuclidean();
    for (int m = 1; m <= L; ++m) {
      for (int k = L; k >= m; --k) {
        double v = quotientNorm(d, m, k, x, opts).value;
        if (!exact) {
          if (m > 1) v = std::min(v, val[m - 1][k]);
          if (k < L) v = std::min(v, val[m][k + 1]);
        }
        val[m][k] = v;
      }
    }
  }
  std::vector<QCell> out;
  for (int m = 1; m <= L; ++m)
    for (int k = m; k <= L; ++k) out.push_back({m, k, val[m][k]});
  return out;
}

std::vector<double> qnDecay(const Decomposition& d, const Vector& x, const EstimateOptions& opts) {
  requireValid(d);
  checkVector(d, x, "qnDecay");
  const int L = d.size();
  std::vector<double> out;
  if (d.model().isL2()) {
    const L2Pairs pairs(d, true);
    const Vector px = pairs.prefixQ.transpose() * x;
    const Vector sx = pairs.suffixQ.transpose() * x;
    for (int n = 1; n <= L; ++n) out.push_back(pairs.distance(n, n, x, px, sx));
    return out;
  }
  for (int n = 1; n <= L; ++n) out.push_back(quotientNorm(d, n, n, x, opts).value);
  return out;
}

// ---------------------------------------------------------------------------
// Duality

DualSystem dualSystem(const Decomposition& d) {
  const Matrix& inv = inverseCoordinates(d);
  DualSystem sys;
  for (int n = 1; n <= d.size(); ++n) {
    Matrix rows = inv.middleRows(d.offset(n), d.space(n).dim());
    sys.functionalSpaces.emplace_back(rows.transpose());
    sys.coefficientFunctionals.push_back(std::move(rows));
  }
  return sys;
}

FunctionalFamily predecompositionFamily(const Decomposition& d) {
  const Matrix& inv = inverseCoordinates(d);
  return FunctionalFamily{inv.topRows(d.totalDim()), d.model()};
}

bool predecompositionSeparates(const Decomposition& d) {
  const FunctionalFamily fam = predecompositionFamily(d);
  return rank(fam.functionals).numericalRank == d.coordDim();
}

NormValue normingConstant(const Decomposition& d, int m, const EstimateOptions& opts) {
  checkIndex(d, m, "normingConstant");
  const FunctionalFamily fam = predecompositionFamily(d);
  const Matrix sub = d.span(m, d.size());
  if (d.model().isEuclidean()) {
    const Matrix s = seminormYOperator(fam);
    const Matrix w = euclidWeight(d);
    const Svd f = svd(w * sub);
    const Vector& sv = f.s;
    int r = 0;
    while (r < sv.size() && sv(r) > opts.rankTol * sv(0)) ++r;
    if (r == 0) throw DegenerateDecompositionError("normingConstant: trivial subspace");
    const Matrix scaled = s * sub * f.v.leftCols(r) *
                          sv.head(r).cwiseInverse().asDiagonal();
    const std::vector<double> sing = singularValues(scaled);
    const double smin = sing.size() < static_cast<std::size_t>(r) ? 0.0 : sing.back();
    if (!(smin > 0)) return {std::numeric_limits<double>::infinity(), true};
    return {1.0 / smin, true};
  }
  // Candidate estimate: ||x|| / (lower bound of ||x||_Y) over structured and
  // random x in X[m, L].
  double best = 1.0;
  auto consider = [&](const Vector& x) {
    const double nx = norm(x, d.model());
    if (!(nx > 0)) return;
    const double sy = seminormY(x, fam);
    if (sy > 0) best = std::max(best, nx / sy);
  };
  const Eigen::Index dim = sub.cols();
  for (Eigen::Index i = 0; i < dim; ++i) consider(sub.col(i));
  Lcg64 rng(opts.seed);
  Vector c(dim);
  for (int b = 0; b < opts.budget; ++b) {
    for (Eigen::Index i = 0; i < dim; ++i) c(i) = rng.uniform(-1.0, 1.0);
    consider(sub * c);
  }
  return {best, false};
}

Decomposition renormByPredecomposition(const Decomposition& d) {
  if (!d.model().isL2()) throw ModelError("renormByPredecomposition: L2 model only");
  const FunctionalFamily fam = predecompositionFamily(d);
  const Matrix qy = orthonormalBasis(fam.functionals.transpose());
  return d.withModel(NormModel::weighted(qy.transpose()));
}

NormingFunctional normingFunctional(const Decomposition& d, const Vector& w, int j) {
  if (!d.model().isL2()) throw ModelError("normingFunctional: L2 model only");
  checkIndex(d, j, "normingFunctional");
  checkVector(d, w, "normingFunctional");
  requireValid(d);
  const Matrix kern = hcat(d.span(j + 1, d.size()), d.tail());
  Vector r = w;
  if (kern.cols() > 0) {
    const Matrix q = orthonormalBasis(kern);
    r -= q * (q.transpose() * w);
  }
  NormingFunctional out;
  out.pairing = r.stableNorm();
  out.functional = out.pairing > 0 ? Vector(r / out.pairing) : Vector::Zero(w.size());
  return out;
}

}  // namespace dlab
