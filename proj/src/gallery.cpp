#include "decomplab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dlab {

using nlohmann::json;

const Decomposition& GalleryCase::decomposition(const std::string& n) const {
  for (const NamedDecomposition& nd : decompositions) {
    if (nd.name == n) return nd.decomposition;
  }
  throw ParameterError("gallery case " + name + " has no decomposition '" + n + "'");
}

const Vector& GalleryCase::vector(const std::string& n) const {
  auto it = vectors.find(n);
  if (it == vectors.end()) throw ParameterError("gallery case " + name + " has no vector '" + n + "'");
  return it->second;
}

namespace {

Vector unit(int n, int i) {
  Vector e = Vector::Zero(n);
  e(i - 1) = 1.0;
  return e;
}

Claim claim(std::string id, std::string op, json args, std::string rel, double expected,
            double tol, std::string quote) {
  return Claim{std::move(id), std::move(op), std::move(args), std::move(rel), expected, tol,
               std::move(quote)};
}

std::string idx(const std::string& base, int n) { return base + "." + std::to_string(n); }

}  // namespace

GalleryCase badddd(int N) {
  if (N < 3) throw ParameterError("badddd: N must be >= 3");
  GalleryCase gc;
  gc.name = "badddd";
  gc.params["N"] = N;
  std::vector<Subspace> spaces;
  for (int n = 1; n <= N - 1; ++n) {
    Vector v = unit(N, 1) + unit(N, n + 1) / n;
    spaces.emplace_back(Matrix(v));
  }
  gc.decompositions.push_back(
      {"main", Decomposition(std::move(spaces), NormModel::l2(), N - 1, Matrix(unit(N, 1)))});
  Vector x = Vector::Zero(N);
  for (int k = 1; k <= N - 1; ++k) x(k) = 1.0 / k;
  gc.vectors["x"] = x;
  gc.vectors["e1"] = unit(N, 1);

  const json main = "main";
  gc.claims.push_back(claim("validate", "validate", {{"decomp", main}}, "eq", 1.0, 0.0,
                            "X_n = [e_1 + e_{n+1}/n]"));
  const int top = std::min(N - 1, 100);
  for (int n = 1; n <= top; ++n) {
    gc.claims.push_back(claim(idx("partial-sum-growth", n), "partialSumVectorNorm",
                              {{"decomp", main}, {"n", n}, {"vector", "x"}}, "gt", n, 0.0,
                              "||P_n x|| > n"));
    gc.claims.push_back(claim(idx("kills-e1", n), "coordProjVectorNorm",
                              {{"decomp", main}, {"n", n}, {"vector", "e1"}}, "le", 0.0, 1e-9,
                              "p_n(e_1) = 0 for all n"));
    gc.claims.push_back(claim(idx("component", n), "coordProjBasisDistance",
                              {{"decomp", main}, {"n", n}, {"vector", "x"}}, "le", 0.0, 1e-9,
                              "p_n(x) = e_1 + e_{n+1}/n"));
    gc.claims.push_back(claim(idx("dual-direction", n), "dualDirectionAngle",
                              {{"decomp", main}, {"n", n}, {"coordinate", n + 1}}, "le", 0.0, 1e-9,
                              "X*_n = [e_{n+1}]"));
  }
  gc.claims.push_back(claim("norming-constant", "normingConstant", {{"decomp", main}, {"m", 1}},
                            "observe", 0.0, 0.0, "Y fails to norm X"));
  gc.claims.push_back(claim("dual-blocking", "dualBlockingCertificate",
                            {{"decomp", main}, {"eps", 0.25}}, "le", 5.0 / 3.0, 1e-6,
                            "(X*_n) is a FDD for its closed linear span"));
  return gc;
}

GalleryCase sbdNotFdd(int N) {
  if (N < 4 || N % 2 != 0) throw ParameterError("sbdNotFdd: N must be even and >= 4");
  GalleryCase gc;
  gc.name = "sbd-not-fdd";
  gc.params["N"] = N;
  std::vector<Subspace> spaces;
  for (int n = 1; n <= N; ++n) {
    Vector v = n % 2 == 1 ? unit(N, n) : Vector(unit(N, n - 1) + unit(N, n) / n);
    spaces.emplace_back(Matrix(v));
  }
  gc.decompositions.push_back({"main", Decomposition(std::move(spaces), NormModel::l2())});

  const json main = "main";
  gc.claims.push_back(claim("validate", "validate", {{"decomp", main}}, "eq", 1.0, 0.0,
                            "[e_{n-1} + e_n/n] when n is even"));
  for (int n = 2; n <= N; ++n) {
    gc.claims.push_back(claim(idx("skipped-norm", n), "skippedNorm",
                              {{"decomp", main}, {"m", n}, {"k", n}}, "eq", 1.0, 1e-8,
                              "||R_n|| = 1"));
  }
  json cuts = json::array();
  for (int j = 1; j <= N / 2; ++j) {
    const double expected = 2.0 * j * std::sqrt(1.0 + 1.0 / (4.0 * j * j));
    gc.claims.push_back(claim(idx("even-projection", 2 * j), "coordProjNorm",
                              {{"decomp", main}, {"n", 2 * j}}, "eq", expected, 1e-8,
                              "||p_{2n}|| = 2n"));
    cuts.push_back(2 * j);
  }
  for (int i = 1; i <= N / 2; ++i) {
    gc.claims.push_back(claim(idx("blocked-partial-sum", i), "blockedPartialSumNorm",
                              {{"decomp", main}, {"cuts", cuts}, {"n", i}}, "eq", 1.0, 1e-8,
                              "m(i) = 2i improves this SBD to a FDD"));
  }
  return gc;
}

std::vector<int> jamesOrder(int K) {
  if (K < 3) throw ParameterError("jamesOrder: K must be >= 3");
  auto block = [](int k, int parity) {
    std::vector<int> out;
    for (int n = (1 << (k - 1)) + 1; n <= (1 << k); ++n) {
      if (n % 2 == parity) out.push_back(n);
    }
    return out;
  };
  std::vector<int> order{1, 2};
  auto append = [&](const std::vector<int>& b) { order.insert(order.end(), b.begin(), b.end()); };
  append(block(2, 0));
  for (int j = 2; j <= K; ++j) {
    if (j + 1 <= K) append(block(j + 1, 0));
    append(block(j, 1));
  }
  return order;
}

GalleryCase jamesPermutation(int K) {
  if (K < 3) throw ParameterError("jamesPermutation: K must be >= 3");
  if (K > 20) throw ParameterError("jamesPermutation: K too large");
  const int N = 1 << K;
  GalleryCase gc;
  gc.name = "james";
  gc.params["K"] = K;
  const std::vector<int> order = jamesOrder(K);

  std::vector<Subspace> singles;
  for (int i : order) singles.emplace_back(Matrix(unit(N, i)));
  gc.decompositions.push_back({"singletons", Decomposition(singles, NormModel::james())});

  // Grouped: six leading singletons, then B_k u A_{k-1}.
  std::vector<Subspace> groups;
  for (int i : {1, 2, 4, 6, 8, 3}) groups.emplace_back(Matrix(unit(N, i)));
  if (K >= 4) {
    for (int k = 4; k <= K + 1; ++k) {
      std::vector<int> members;
      if (k <= K) {
        for (int n = (1 << (k - 1)) + 2; n <= (1 << k); n += 2) members.push_back(n);
      }
      for (int n = (1 << (k - 2)) + 1; n <= (1 << (k - 1)); n += 2) members.push_back(n);
      Matrix b = Matrix::Zero(N, static_cast<Eigen::Index>(members.size()));
      for (std::size_t c = 0; c < members.size(); ++c) b(members[c] - 1, c) = 1.0;
      groups.emplace_back(std::move(b));
    }
  } else {
    for (int n : {5, 7}) groups.emplace_back(Matrix(unit(N, n)));
  }
  gc.decompositions.push_back({"grouped", Decomposition(std::move(groups), NormModel::james())});

  Vector x = Vector::Zero(N);
  x(0) = 1.0;
  for (int k = 1; k <= K; ++k) {
    for (int n = (1 << (k - 1)) + 1; n <= (1 << k); ++n) x(n - 1) = 1.0 / k;
  }
  gc.vectors["x"] = x;

  const json singlesName = "singletons";
  const json groupedName = "grouped";
  gc.claims.push_back(claim("validate.singletons", "validate", {{"decomp", singlesName}}, "eq", 1.0,
                            0.0, "reorders the integers in alternating blocks"));
  gc.claims.push_back(claim("validate.grouped", "validate", {{"decomp", groupedName}}, "eq", 1.0,
                            0.0, "X_k = [e_i: i in B_k u A_{k-1}]"));
  gc.claims.push_back(claim("x-norm", "vectorNorm", {{"decomp", singlesName}, {"vector", "x"}},
                            "eq", 1.0, 1e-10, "Eventually, ||x|| = 1"));

  // Cut positions: last index of A_{k-1} and of B_{k+1} in the order.
  std::vector<int> pos(N + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i) + 1;
  auto lastOf = [&](int k, int parity) {
    int best = 0;
    for (int n = (1 << (k - 1)) + 1; n <= (1 << k); ++n) {
      if (n % 2 == parity) best = std::max(best, pos[n]);
    }
    return best;
  };
  for (int k = 4; k <= K; ++k) {
    const double bound = (std::ldexp(1.0, k - 1) - 1.0) / (k * k);
    const double stated = std::sqrt(std::ldexp(1.0, k)) / k;
    std::vector<std::pair<std::string, int>> cutsAt{{"a", lastOf(k - 1, 1)}};
    if (k + 1 <= K) cutsAt.push_back({"b", lastOf(k + 1, 0)});
    for (const auto& [tag, n] : cutsAt) {
      const std::string base = "growth.k" + std::to_string(k) + tag;
      gc.claims.push_back(claim(base, "partialSumVectorNormSq",
                                {{"decomp", singlesName}, {"n", n}, {"vector", "x"}}, "ge", bound,
                                0.0, "||z_n|| >= sqrt(2^k/k^2)"));
      gc.claims.push_back(claim(base + ".stated", "partialSumVectorNorm",
                                {{"decomp", singlesName}, {"n", n}, {"vector", "x"}}, "observe",
                                stated, 0.0, "||z_n|| >= sqrt(2^k/k^2)"));
    }
    gc.claims.push_back(claim("component.k" + std::to_string(k), "coordProjVectorNormSq",
                              {{"decomp", groupedName}, {"n", k + 3}, {"vector", "x"}}, "ge",
                              bound, 0.0, "||p_k(x)|| >= sqrt(2^k/k^2)"));
    gc.claims.push_back(claim("quotient.k" + std::to_string(k), "quotientNorm",
                              {{"decomp", groupedName}, {"m", k + 3}, {"k", k + 3}, {"vector", "x"}},
                              "le", 1.0 / (k - 1), 1e-12, "q_k(x) = q_k(p_k(x)) -> 0"));
  }
  if (N <= 32) {
    gc.claims.push_back(claim("greedy-blocking", "greedyBlockingCertificate",
                              {{"decomp", singlesName}, {"c", 2.0}, {"eps", 0.1}}, "le",
                              2.0 / (1.0 - 0.6), 1e-6, "can be blocked to be a SBD"));
  }
  return gc;
}

GalleryCase permutedBasisCase(const std::vector<int>& perm, const NormModel& model) {
  const int N = static_cast<int>(perm.size());
  if (N == 0) throw ParameterError("permutedBasisCase: empty permutation");
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < N; ++i) {
    if (sorted[i] != i + 1) throw ParameterError("permutedBasisCase: not a permutation of 1..N");
  }
  GalleryCase gc;
  gc.name = "permuted";
  gc.params["N"] = N;
  std::vector<Subspace> spaces;
  for (int i : perm) spaces.emplace_back(Matrix(unit(N, i)));
  gc.decompositions.push_back({"main", Decomposition(std::move(spaces), model)});
  const json main = "main";
  gc.claims.push_back(claim("validate", "validate", {{"decomp", main}}, "eq", 1.0, 0.0,
                            "(e_{pi(n)}) is a basis"));
  if (model.isL2()) {
    gc.claims.push_back(claim("dual-blocking", "dualBlockingCertificate",
                              {{"decomp", main}, {"eps", 0.25}}, "le", 5.0 / 3.0, 1e-6,
                              "blocked so that the coefficient functionals form an SBD"));
  } else if (N <= 32) {
    gc.claims.push_back(claim("greedy-blocking", "greedyBlockingCertificate",
                              {{"decomp", main}, {"c", 2.0}, {"eps", 0.1}}, "le",
                              2.0 / (1.0 - 0.6), 1e-6, "can be blocked to be a SBD"));
  }
  gc.claims.push_back(claim("constant-K", "constantK", {{"decomp", main}}, "observe", 0.0, 0.0,
                            "K = sup ||R_n||"));
  return gc;
}

GalleryCase galleryCase(const std::string& name, int n) {
  if (name == "badddd") return badddd(n);
  if (name == "sbd-not-fdd") return sbdNotFdd(n);
  if (name == "james") return jamesPermutation(n);
  if (name == "permuted-reversal") {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::reverse(perm.begin(), perm.end());
    return permutedBasisCase(perm, NormModel::l2());
  }
  if (name == "james-permuted") {
    return permutedBasisCase(jamesOrder(n), NormModel::james());
  }
  throw ParameterError("unknown gallery case '" + name + "'");
}

}  // namespace dlab
