#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "decomplab/blocking.hpp"
#include "decomplab/decomposition.hpp"
#include "decomplab/gallery.hpp"

namespace dlab {

/// A decomposition document together with its named vectors.
struct DecompositionFile {
  Decomposition decomposition;
  std::map<std::string, Vector> vectors;
};

nlohmann::json modelToJson(const NormModel& model);
NormModel modelFromJson(const nlohmann::json& j);

nlohmann::json decompositionToJson(const Decomposition& d,
                                   const std::map<std::string, Vector>& vectors = {});
DecompositionFile decompositionFromJson(const nlohmann::json& j);

/// Parses JSON text; syntax errors raise ParseError with line and column.
nlohmann::json parseJsonText(const std::string& text);
DecompositionFile parseDecomposition(const std::string& text);
std::string readFile(const std::string& path);
DecompositionFile readDecomposition(const std::string& path);

nlohmann::json blockingToJson(const Blocking& b);
Blocking blockingFromJson(const nlohmann::json& j);

nlohmann::json constantsToJson(const ConstantsReport& r);
ConstantsReport constantsFromJson(const nlohmann::json& j);

/// Real number with 17 significant digits.
std::string formatReal(double v);
/// Header m,k,norm and one row per cell.
std::string constantsToCsv(const ConstantsReport& r);
std::vector<RCell> constantsFromCsv(const std::string& text);

nlohmann::json claimToJson(const Claim& c);
/// Claim id, operation, arguments, relation, expected bound, tolerance per claim.
nlohmann::json claimsManifest(const GalleryCase& gc);

/// Indented JSON with a trailing newline.
std::string dumpJson(const nlohmann::json& j);

}  // namespace dlab
