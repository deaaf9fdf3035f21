#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decomplab/blocking.hpp"
#include "decomplab/decomposition.hpp"

namespace dlab {

/// A checkable statement about a gallery case.
///
/// `operation` names a measurement (see evaluateClaim); `args` holds its
/// parameters, with "decomp" naming one of the case's decompositions.
/// relation: "gt" value > expected; "ge" value >= expected - tol;
/// "le" value <= expected + tol; "eq" |value - expected| <= tol;
/// "observe" always passes and only records the value.
struct Claim {
  std::string id;
  std::string operation;
  nlohmann::json args;
  std::string relation;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string quote;
};

struct NamedDecomposition {
  std::string name;
  Decomposition decomposition;
};

struct GalleryCase {
  std::string name;
  std::map<std::string, int> params;
  std::vector<NamedDecomposition> decompositions;  // first one is the primary
  std::map<std::string, Vector> vectors;
  std::vector<Claim> claims;

  const Decomposition& primary() const { return decompositions.front().decomposition; }
  const Decomposition& decomposition(const std::string& name) const;
  const Vector& vector(const std::string& name) const;
};

/// X_n = [e_1 + e_{n+1}/n], n = 1..N-1, in R^N. The ambient space is their
/// span and the tail is [e_1], which every p_n annihilates. x = sum e_{k+1}/k.
GalleryCase badddd(int N);

/// N even >= 4. Odd n: [e_n]; even n: [e_{n-1} + e_n/n].
GalleryCase sbdNotFdd(int N);

/// The reordering 1, 2, B_2, B_3, A_2, B_4, A_3, ..., B_K, A_{K-1}, A_K of
/// 1..2^K (1-based), where A_k / B_k are the odd / even n with
/// 2^{k-1} < n <= 2^k.
std::vector<int> jamesOrder(int K);

/// James model on 2^K coordinates. Decompositions: "singletons" (e_{pi(i)})
/// and "grouped": singletons e_1, e_2, e_4, e_6, e_8, e_3 followed by
/// [e_i : i in B_k u A_{k-1}] for k = 4..K+1 (B_{K+1} is empty), so group k
/// sits at index k + 3. x = e_1 + sum_k w_k / k.
GalleryCase jamesPermutation(int K);

/// Singletons e_{perm(1)}, ..., e_{perm(N)}; perm is 1-based and must be a bijection.
GalleryCase permutedBasisCase(const std::vector<int>& perm, const NormModel& model);

/// Case by name ("badddd", "sbd-not-fdd", "james", "permuted-reversal") and size.
GalleryCase galleryCase(const std::string& name, int n);

struct ClaimResult {
  Claim claim;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool exact = true;
};

/// Tolerance override replaces the tolerance of every non-strict claim.
ClaimResult evaluateClaim(const GalleryCase& gc, const Claim& claim,
                          const EstimateOptions& opts = {},
                          std::optional<double> tolOverride = std::nullopt);
std::vector<ClaimResult> evaluateClaims(const GalleryCase& gc, const EstimateOptions& opts = {},
                                        std::optional<double> tolOverride = std::nullopt);

}  // namespace dlab
