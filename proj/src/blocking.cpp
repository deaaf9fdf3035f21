#include "decomplab/blocking.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dlab {

void checkBlocking(const Blocking& b, int len) {
  if (b.cuts.empty()) throw ParameterError("blocking: no cuts");
  int prev = 0;
  for (int c : b.cuts) {
    if (c <= prev) throw ParameterError("blocking: cuts must be strictly increasing and positive");
    prev = c;
  }
  if (prev != len) throw ParameterError("blocking: last cut must equal the decomposition length");
}

Blocking identityBlocking(int len) {
  Blocking b;
  for (int n = 1; n <= len; ++n) b.cuts.push_back(n);
  return b;
}

Decomposition applyBlocking(const Decomposition& d, const Blocking& b) {
  checkBlocking(b, d.size());
  std::vector<Subspace> spaces;
  int prev = 0;
  for (int c : b.cuts) {
    spaces.emplace_back(d.span(prev + 1, c));
    prev = c;
  }
  return Decomposition(std::move(spaces), d.model(), d.ambientDim(),
                       d.hasExplicitTail() ? std::optional<Matrix>(d.tail()) : std::nullopt);
}

// ---------------------------------------------------------------------------
// Nets

namespace {

constexpr int kMaxMeshPoints = 20000;

// Basis of span(basis) that is orthonormal for the Euclidean model inner product.
Matrix modelOrthonormal(const Matrix& basis, const NormModel& model) {
  const Matrix q = orthonormalBasis(basis);
  if (model.isL2()) return q;
  const Matrix wq = model.weight() * q;
  const Svd f = svd(wq);
  const Vector& s = f.s;
  if (s.size() == 0 || !(s(s.size() - 1) > kDefaultRankTol * s(0))) {
    throw DegenerateDecompositionError("sphereNet: weighted norm degenerate on subspace");
  }
  return q * f.v * s.cwiseInverse().asDiagonal();
}

void cubeSurface(int dim, double step, std::vector<Vector>& out) {
  const int per = static_cast<int>(std::ceil(2.0 / step));
  std::vector<double> ticks;
  for (int i = 0; i <= per; ++i) ticks.push_back(std::min(1.0, -1.0 + 2.0 * i / per));
  for (int fixed = 0; fixed < dim; ++fixed) {
    for (double sign : {-1.0, 1.0}) {
      if (dim == 1) {
        out.push_back(Vector::Constant(1, sign));
        continue;
      }
      std::vector<int> free;
      for (int j = 0; j < dim; ++j) {
        if (j != fixed) free.push_back(j);
      }
      std::vector<std::size_t> idx(free.size(), 0);
      while (true) {
        Vector c(dim);
        c(fixed) = sign;
        for (std::size_t t = 0; t < free.size(); ++t) c(free[t]) = ticks[idx[t]];
        out.push_back(c);
        std::size_t t = 0;
        while (t < idx.size() && ++idx[t] == ticks.size()) idx[t++] = 0;
        if (t == idx.size()) break;
      }
    }
  }
}

}  // namespace

EpsilonNet sphereNet(const Matrix& basis, const NormModel& model, double eps, std::uint64_t seed,
                     int randomCount) {
  if (!(eps > 0)) throw ParameterError("sphereNet: eps must be positive");
  if (basis.cols() == 0) throw DimensionError("sphereNet: trivial subspace");
  EpsilonNet net;
  net.epsilon = eps;
  std::ostringstream log;
  const int dim = static_cast<int>(basis.cols());

  if (model.isEuclidean() && dim <= 3) {
    const double step = eps / 2.0;
    const long per = static_cast<long>(std::ceil(2.0 / step)) + 1;
    long count = 2L * dim;
    for (int j = 1; j < dim; ++j) count *= per;
    if (count <= kMaxMeshPoints) {
      const Matrix q = modelOrthonormal(basis, model);
      std::vector<Vector> coeffs;
      cubeSurface(dim, step, coeffs);
      for (const Vector& c : coeffs) {
        const Vector p = q * c;
        net.points.push_back(p / norm(p, model));
      }
      net.certified = true;
      log << "mesh dim=" << dim << " step=" << step << " points=" << net.points.size();
      net.log = log.str();
      return net;
    }
  }

  const Matrix q = model.isEuclidean() ? modelOrthonormal(basis, model) : orthonormalBasis(basis);
  auto push = [&](const Vector& p) {
    const double n = norm(p, model);
    if (n > 0) net.points.push_back(p / n);
  };
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    push(q.col(j));
    push(-q.col(j));
  }
  Lcg64 rng(seed);
  Vector c(q.cols());
  for (int i = 0; i < randomCount; ++i) {
    for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = rng.uniform(-1.0, 1.0);
    push(q * c);
  }
  log << "random dim=" << dim << " seed=" << seed << " points=" << net.points.size()
      << " coverage not certified";
  net.log = log.str();
  return net;
}

// ---------------------------------------------------------------------------
// Greedy blocking

GreedyBlockingResult greedyBlocking(const Decomposition& d, double c, double eps,
                                    const EstimateOptions& opts, int netSize) {
  if (!(c >= 1.0)) throw ParameterError("greedyBlocking: c must be >= 1");
  if (!(eps > 0.0 && eps < 1.0 / (3.0 * c))) {
    throw ParameterError("greedyBlocking: eps must lie in (0, 1/(3c))");
  }
  requireValid(d);
  const int L = d.size();
  const double threshold = 1.0 / c - eps;
  GreedyBlockingResult res;
  res.claimedBound = c / (1.0 - 3.0 * eps * c);
  res.certified = d.model().isEuclidean();

  const FunctionalFamily fam = predecompositionFamily(d);
  const bool l2 = d.model().isL2();
  Matrix qy;
  if (l2) {
    Eigen::HouseholderQR<Matrix> qr(fam.functionals.transpose());
    qy = qr.householderQ() * Matrix::Identity(d.coordDim(), fam.functionals.rows());
  }
  auto prefixFamily = [&](int M) {
    return FunctionalFamily{fam.functionals.topRows(d.offset(M + 1)), fam.model};
  };

  int m = 1;
  res.blocking.cuts.push_back(1);
  while (m < L) {
    const Matrix sub = d.span(1, m);
    EpsilonNet net = sphereNet(sub, d.model(), eps, opts.seed + static_cast<std::uint64_t>(m),
                               netSize);
    res.certified = res.certified && net.certified;
    if (l2) {
      const Matrix b = orthonormalBasis(sub);
      const Svd f = svd(qy.transpose() * b, true);
      const Vector w = b * f.v.col(b.cols() - 1);
      net.points.push_back(w / w.norm());
    }

    int needed = m + 1;
    double worst = std::numeric_limits<double>::infinity();
    Vector worstPoint;
    for (const Vector& w : net.points) {
      double full = 0.0;
      int M = L;
      if (l2) {
        const Vector coeff = qy.transpose() * w;
        full = coeff.norm();
        double acc = 0.0;
        int row = 0;
        for (int j = 1; j <= L; ++j) {
          for (; row < d.offset(j + 1); ++row) acc += coeff(row) * coeff(row);
          if (std::sqrt(acc) > threshold) {
            M = j;
            break;
          }
        }
      } else {
        full = seminormY(w, fam);
        if (full > threshold) {
          for (int j = 1; j <= L; ++j) {
            if (seminormY(w, prefixFamily(j)) > threshold) {
              M = j;
              break;
            }
          }
        }
      }
      if (full < worst) {
        worst = full;
        worstPoint = w;
      }
      if (full > threshold) needed = std::max(needed, M);
    }
    if (worst <= threshold) {
      res.success = false;
      res.witness = worstPoint;
      res.pairing = worst;
      res.failedAt = m;
      std::ostringstream msg;
      msg << "no functional in Y pairs above 1/c - eps = " << threshold << " with a unit vector of X[1,"
          << m << "] (best pairing " << worst << ")";
      res.message = msg.str();
      return res;
    }

    int next = std::min(L, needed);
    double measured = 1.0;
    while (true) {
      const NormValue r = skippedNorm(d, m + 1, next, opts);
      measured = r.value;
      if (!r.exact) res.certified = false;
      if (measured <= res.claimedBound || next == L) break;
      ++next;
    }
    res.measured.push_back(measured);
    res.blocking.cuts.push_back(next);
    m = next;
  }
  res.success = true;
  res.message = "ok";
  return res;
}

// ---------------------------------------------------------------------------
// Dual blocking

Decomposition dualDecomposition(const Decomposition& d) {
  const DualSystem sys = dualSystem(d);
  // Functionals act on the ambient space, so their norm only sees its
  // component there; with the default tail this is the plain l2 norm.
  NormModel model = NormModel::l2();
  if (d.hasExplicitTail()) {
    if (!d.model().isL2()) throw ModelError("dualDecomposition: L2 model only");
    model = NormModel::weighted(orthonormalBasis(d.basis()).transpose());
  }
  return Decomposition(sys.functionalSpaces, model, d.totalDim());
}

DualBlockingResult dualBlocking(const Decomposition& d, double eps, const EstimateOptions& opts,
                                int netSize) {
  if (!d.model().isL2()) throw ModelError("dualBlocking: L2 model only");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("dualBlocking: eps must lie in (0, 1)");
  requireValid(d);
  const int L = d.size();
  const Decomposition dual = dualDecomposition(d);
  const Matrix ambientQ = orthonormalBasis(d.basis());
  DualBlockingResult res;
  res.claimedBound = (1.0 + eps) / (1.0 - eps);
  res.certified = true;

  int m = 1;
  res.blocking.cuts.push_back(1);
  while (m < L) {
    const Matrix wBasis = dual.span(1, m);
    const EpsilonNet net = sphereNet(wBasis, dual.model(), eps,
                                     opts.seed + static_cast<std::uint64_t>(m), netSize);
    res.certified = res.certified && net.certified;
    const Matrix far = d.span(m + 1, L);
    Eigen::HouseholderQR<Matrix> qr(far);
    const Matrix qFar = qr.householderQ() * Matrix::Identity(d.coordDim(), far.cols());

    int needed = m + 1;
    for (const Vector& w : net.points) {
      // z: the unit vector of X paired to 1 with w; a: its representative in X[1,m].
      const Vector z = ambientQ * (ambientQ.transpose() * w);
      const Vector a = applyPartialSum(d, m, z);
      const Vector ca = qFar.transpose() * a;
      double rest = a.squaredNorm();
      int M = L;
      if (std::sqrt(std::max(rest, 0.0)) < 1.0 + eps) {
        M = m;
      } else {
        int col = 0;
        for (int j = m + 1; j <= L; ++j) {
          for (; col < d.offset(j + 1) - d.offset(m + 1); ++col) rest -= ca(col) * ca(col);
          if (std::sqrt(std::max(rest, 0.0)) < 1.0 + eps) {
            M = j;
            break;
          }
        }
      }
      needed = std::max(needed, M);
    }

    int next = std::min(L, needed);
    double measured = 1.0;
    while (true) {
      measured = skippedNorm(dual, m + 1, next, opts).value;
      if (measured <= res.claimedBound || next == L) break;
      ++next;
    }
    res.measured.push_back(measured);
    res.blocking.cuts.push_back(next);
    m = next;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Mazur construction

MazurResult mazurConstruct(const std::vector<Vector>& candidates, const NormModel& model,
                           const std::vector<double>& epsSchedule) {
  if (!model.isL2()) throw ModelError("mazurConstruct: L2 model only");
  if (candidates.empty()) throw DimensionError("mazurConstruct: no candidates");
  if (epsSchedule.empty()) throw ParameterError("mazurConstruct: empty eps schedule");
  for (double e : epsSchedule) {
    if (!(e > 0)) throw ParameterError("mazurConstruct: eps_n must be positive");
  }
  const Eigen::Index n = candidates.front().size();
  Matrix w(n, 0);  // least-squares duals of X[1,k]: orthonormal, so they norm exactly
  std::vector<Subspace> spaces;
  std::vector<int> skipped;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Vector& x = candidates[i];
    if (x.size() != n) throw DimensionError("mazurConstruct: candidate length mismatch");
    requireFinite(x, "mazurConstruct");
    Vector v = x;
    if (w.cols() > 0) v -= w * (w.transpose() * x);
    if (!(v.norm() > kDefaultRankTol * std::max(1.0, x.norm()))) {
      skipped.push_back(static_cast<int>(i));
      continue;
    }
    // Re-orthogonalize once for stability.
    if (w.cols() > 0) v -= w * (w.transpose() * v);
    spaces.emplace_back(Matrix(v));
    w.conservativeResize(Eigen::NoChange, w.cols() + 1);
    w.col(w.cols() - 1) = v / v.norm();
  }
  if (spaces.empty()) throw DegenerateDecompositionError("mazurConstruct: all candidates vanish");
  const int reached = static_cast<int>(w.cols());
  MazurResult out{Decomposition(std::move(spaces), model, reached), {}, {}, 0, std::move(skipped)};
  out.unreachedDim = static_cast<int>(n) - reached;
  const int L = out.decomposition.size();
  for (int k = 1; k < L; ++k) {
    const double e = epsSchedule[std::min<std::size_t>(k - 1, epsSchedule.size() - 1)];
    out.stepBounds.push_back(1.0 + e);
    out.measuredR.push_back(skippedNorm(out.decomposition, k + 1, k + 1).value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convergent approximation

std::vector<ConvStep> convApproximation(const Decomposition& d, const Vector& x,
                                        const EstimateOptions& opts) {
  requireValid(d);
  if (x.size() != d.coordDim()) throw DimensionError("convApproximation: vector length mismatch");
  requireFinite(x, "convApproximation");
  const int L = d.size();
  const NormModel& model = d.model();
  const int t = static_cast<int>(d.tail().cols());

  // Orthonormal basis of R^N whose prefixes span tail + X[1,J].
  Matrix joint(d.coordDim(), t + d.totalDim());
  if (t > 0) joint.leftCols(t) = d.tail();
  joint.rightCols(d.totalDim()) = d.basis();
  Eigen::HouseholderQR<Matrix> qr(joint);
  const Matrix q = qr.householderQ();
  const Vector cx = q.transpose() * x;
  Vector suffix(cx.size() + 1);
  suffix(cx.size()) = 0.0;
  for (Eigen::Index i = cx.size() - 1; i >= 0; --i) suffix(i) = suffix(i + 1) + cx(i) * cx(i);

  std::vector<ConvStep> steps;
  int m = 1;
  for (int k = 1; m < L; ++k) {
    const Matrix pm = partialSum(d, m);
    double bigM;
    if (model.isEuclidean()) {
      bigM = operatorNorm(d, pm, Matrix::Identity(d.coordDim(), d.coordDim()), opts).value;
    } else {
      bigM = 2.0 * maximizeRatio(pm, model, opts.budget, opts.seed).value;
    }
    bigM = std::max(bigM, 1.0);
    const double scale = std::ldexp(1.0, -k);
    const Vector pmx = pm * x;

    ConvStep step;
    step.bound = 2.0 * scale;
    step.partialNorm = norm(pmx, model);
    for (int j = m; j <= L; ++j) {
      const int cols = t + d.offset(j + 1);
      Vector w;
      if (j == L) {
        w = x;
      } else {
        if (model.isL2() && std::sqrt(suffix(cols)) >= scale / bigM) continue;
        w = q.leftCols(cols) * cx.head(cols);
      }
      if (!(norm(x - w, model) < scale / bigM) && j < L) continue;
      const Vector corrector = w - pm * w;
      const double err = norm(x - (pmx + corrector), model);
      if (!(err < step.bound) && j < L) continue;
      step.cut = std::max(j, m + 1);
      step.corrector = corrector;
      step.error = err;
      break;
    }
    steps.push_back(step);
    m = step.cut;
  }
  return steps;
}

// ---------------------------------------------------------------------------
// Biorthogonal systems

Decomposition dddFromBiorthogonal(const std::vector<Vector>& vectors,
                                  const std::vector<Vector>& functionals, const Blocking& grouping,
                                  const NormModel& model, double tol) {
  if (vectors.empty()) throw DimensionError("dddFromBiorthogonal: no vectors");
  if (vectors.size() != functionals.size()) {
    throw DimensionError("dddFromBiorthogonal: vector and functional counts differ");
  }
  const Eigen::Index n = vectors.front().size();
  const int count = static_cast<int>(vectors.size());
  if (count > n) throw DimensionError("dddFromBiorthogonal: more vectors than coordinates");
  checkBlocking(grouping, count);
  Matrix x(n, count), f(n, count);
  for (int i = 0; i < count; ++i) {
    if (vectors[i].size() != n || functionals[i].size() != n) {
      throw DimensionError("dddFromBiorthogonal: length mismatch");
    }
    x.col(i) = vectors[i];
    f.col(i) = functionals[i];
  }
  requireFinite(x, "dddFromBiorthogonal vectors");
  requireFinite(f, "dddFromBiorthogonal functionals");
  const Matrix pairing = f.transpose() * x;
  int worstRow = 0, worstCol = 0;
  double worst = -1.0;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const double dev = std::abs(pairing(i, j) - (i == j ? 1.0 : 0.0));
      if (dev > worst) {
        worst = dev;
        worstRow = i;
        worstCol = j;
      }
    }
  }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "biorthogonality violated at functional " << worstRow + 1 << ", vector "
        << worstCol + 1 << " (deviation " << worst << ")";
    throw BiorthogonalityError(msg.str(), worstRow + 1, worstCol + 1, worst);
  }
  std::vector<Subspace> spaces;
  int prev = 0;
  for (int c : grouping.cuts) {
    spaces.emplace_back(x.middleCols(prev, c - prev));
    prev = c;
  }
  Matrix tail = orthogonalComplement(f);
  return Decomposition(std::move(spaces), model, count, std::move(tail));
}

}  // namespace dlab
