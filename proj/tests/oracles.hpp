#pragma once

// Independent reference computations and seeded generators for the tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "decomplab/decomposition.hpp"

namespace oracle {

using dlab::Lcg64;
using dlab::Matrix;
using dlab::Vector;

/// Squared James norm by enumerating every subset of positions 1..n+1
/// (position n+1 is the virtual zero).
inline double jamesSqBrute(const Vector& v) {
  const int n = static_cast<int>(v.size());
  auto at = [&](int i) { return i < n ? v(i) : 0.0; };
  double best = 0.0;
  const unsigned long total = 1UL << (n + 1);
  for (unsigned long mask = 1; mask < total; ++mask) {
    double acc = 0.0;
    int prev = -1;
    for (int i = 0; i <= n; ++i) {
      if (!(mask >> i & 1UL)) continue;
      if (prev >= 0) acc += (at(i) - at(prev)) * (at(i) - at(prev));
      prev = i;
    }
    best = std::max(best, acc);
  }
  return best;
}

inline Matrix randomMatrix(Lcg64& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

inline Vector randomVector(Lcg64& rng, int n) { return randomMatrix(rng, n, 1).col(0); }

/// Random l2 decomposition: coordinate space R^N with N <= maxCoord, ambient
/// dimension a <= N split into at most maxSpaces consecutive random blocks.
inline dlab::Decomposition randomDecomposition(Lcg64& rng, int maxCoord = 12, int maxSpaces = 6,
                                               dlab::NormModel model = dlab::NormModel::l2()) {
  const int n = 2 + static_cast<int>(rng.below(maxCoord - 1));
  const int a = 1 + static_cast<int>(rng.below(n));
  const int len = 1 + static_cast<int>(rng.below(std::min(maxSpaces, a)));
  // Cut points: len - 1 distinct values in 1..a-1.
  std::vector<int> cuts;
  while (static_cast<int>(cuts.size()) < len - 1) {
    const int c = 1 + static_cast<int>(rng.below(a - 1));
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(a);
  const Matrix basis = randomMatrix(rng, n, a);
  std::vector<dlab::Subspace> spaces;
  int prev = 0;
  for (int c : cuts) {
    spaces.emplace_back(basis.middleCols(prev, c - prev));
    prev = c;
  }
  return dlab::Decomposition(std::move(spaces), model, a);
}

/// Distance from x to span(basis) by normal equations on an orthonormal basis.
inline double l2Distance(const Vector& x, const Matrix& basis) {
  if (basis.cols() == 0) return x.norm();
  Eigen::ColPivHouseholderQR<Matrix> qr(basis);
  const Vector c = qr.solve(x);
  return (x - basis * c).norm();
}

/// Operator norm of op restricted to span(domain), via the Gram matrix.
inline double restrictedNorm(const Matrix& op, const Matrix& domain) {
  if (domain.cols() == 0) return 0.0;
  Eigen::HouseholderQR<Matrix> qr(domain);
  const Matrix q = qr.householderQ() * Matrix::Identity(domain.rows(), domain.cols());
  const Matrix img = op * q;
  Eigen::SelfAdjointEigenSolver<Matrix> es(img.transpose() * img);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace oracle
