// decomp-lab: command line front end for the decomposition library.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "decomplab/blocking.hpp"
#include "decomplab/gallery.hpp"
#include "decomplab/io.hpp"

namespace {

using nlohmann::json;
using namespace dlab;

constexpr const char* kVersion = "0.1.0";
constexpr double kDefaultBoundTol = 1e-6;

struct Config {
  std::string command;
  std::string input;
  std::string output;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  double tolRank = kDefaultRankTol;
  std::optional<double> tolClaim;
  std::optional<int> n;
  std::optional<int> k;
  double c = 2.0;
  double eps = 0.1;
  int window = 0;
  int budget = 64;
  bool claims = false;
  bool manifest = false;
  std::string caseName;
  std::string vectorName = "x";
};

struct Outcome {
  std::string text;
  int exitCode = 0;
};

std::uint64_t resolveSeed(const Config& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("DECOMP_LAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ParseError("DECOMP_LAB_SEED is not an unsigned integer");
    return v;
  }
  return 0;
}

EstimateOptions estimateOptions(const Config& cfg) {
  EstimateOptions o;
  o.seed = resolveSeed(cfg);
  o.rankTol = cfg.tolRank;
  o.budget = cfg.budget;
  return o;
}

double boundTol(const Config& cfg) { return cfg.tolClaim.value_or(kDefaultBoundTol); }

json header(const Config& cfg) {
  json tol{{"rank", cfg.tolRank}, {"bound", boundTol(cfg)}};
  if (cfg.tolClaim) tol["claimOverride"] = *cfg.tolClaim;
  return json{{"tool", "decomp-lab"},
              {"version", kVersion},
              {"command", cfg.command},
              {"seed", resolveSeed(cfg)},
              {"budget", cfg.budget},
              {"tolerances", tol}};
}

DecompositionFile loadInput(const Config& cfg) {
  if (cfg.input.empty()) throw ParseError("--input is required for '" + cfg.command + "'");
  return readDecomposition(cfg.input);
}

const Vector& pickVector(const DecompositionFile& f, const std::string& name) {
  auto it = f.vectors.find(name);
  if (it == f.vectors.end()) throw ParseError("input has no vector named '" + name + "'");
  return it->second;
}

json vectorJson(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Outcome runNorm(const Config& cfg) {
  const DecompositionFile f = loadInput(cfg);
  json norms = json::object();
  for (const auto& [name, v] : f.vectors) norms[name] = norm(v, f.decomposition.model());
  json r = header(cfg);
  r["model"] = modelToJson(f.decomposition.model());
  r["norms"] = norms;
  return {dumpJson(r), 0};
}

Outcome runValidate(const Config& cfg) {
  const DecompositionFile f = loadInput(cfg);
  const ValidationReport v = validate(f.decomposition, cfg.tolRank);
  json r = header(cfg);
  r["validation"] = json{{"total", v.total},
                         {"minimal", v.minimal},
                         {"tailComplementary", v.tailComplementary},
                         {"rankAll", v.rankAll},
                         {"ambientDim", v.ambientDim},
                         {"dims", v.dims},
                         {"rankWithout", v.rankWithout},
                         {"message", v.message}};
  r["pass"] = v.valid();
  return {dumpJson(r), v.valid() ? 0 : 2};
}

Outcome runConstants(const Config& cfg) {
  const DecompositionFile f = loadInput(cfg);
  const ConstantsReport rep = constantsReport(f.decomposition, cfg.window, estimateOptions(cfg));
  if (cfg.format == "csv") return {constantsToCsv(rep), 0};
  json r = header(cfg);
  r["constants"] = constantsToJson(rep);
  return {dumpJson(r), 0};
}

Outcome runBlock(const Config& cfg) {
  const DecompositionFile f = loadInput(cfg);
  const GreedyBlockingResult g = greedyBlocking(f.decomposition, cfg.c, cfg.eps, estimateOptions(cfg));
  json r = header(cfg);
  r["c"] = cfg.c;
  r["eps"] = cfg.eps;
  r["success"] = g.success;
  r["certified"] = g.certified;
  r["claimedBound"] = g.claimedBound;
  r["blocking"] = blockingToJson(g.blocking);
  r["measured"] = g.measured;
  r["message"] = g.message;
  bool pass = g.success;
  for (double m : g.measured) pass = pass && m <= g.claimedBound + boundTol(cfg);
  if (!g.success) {
    r["failure"] = json{{"witness", vectorJson(g.witness)}, {"pairing", g.pairing}, {"cut", g.failedAt}};
  }
  r["pass"] = pass;
  return {dumpJson(r), pass ? 0 : 2};
}

Outcome runDualBlock(const Config& cfg) {
  const DecompositionFile f = loadInput(cfg);
  const DualBlockingResult d = dualBlocking(f.decomposition, cfg.eps, estimateOptions(cfg));
  bool pass = true;
  for (double m : d.measured) pass = pass && m <= d.claimedBound + boundTol(cfg);
  json r = header(cfg);
  r["eps"] = cfg.eps;
  r["certified"] = d.certified;
  r["claimedBound"] = d.claimedBound;
  r["blocking"] = blockingToJson(d.blocking);
  r["measured"] = d.measured;
  r["pass"] = pass;
  return {dumpJson(r), pass ? 0 : 2};
}

Outcome runMazur(const Config& cfg) {
  std::vector<Vector> candidates;
  if (!cfg.input.empty()) {
    const DecompositionFile f = loadInput(cfg);
    for (const auto& [name, v] : f.vectors) candidates.push_back(v);
  } else {
    const int dim = cfg.n.value_or(8);
    if (dim < 1) throw ParameterError("--n must be positive");
    Lcg64 rng(resolveSeed(cfg));
    for (int i = 0; i < dim + 2; ++i) {
      Vector v(dim);
      for (int j = 0; j < dim; ++j) v(j) = rng.uniform(-1.0, 1.0);
      candidates.push_back(v);
    }
  }
  if (candidates.empty()) throw ParseError("no candidate vectors");
  std::vector<double> schedule;
  for (std::size_t i = 1; i <= candidates.size(); ++i) schedule.push_back(std::ldexp(1.0, -static_cast<int>(i)));
  const MazurResult m = mazurConstruct(candidates, NormModel::l2(), schedule);
  const bool valid = validate(m.decomposition, cfg.tolRank).valid();
  bool pass = valid;
  json steps = json::array();
  for (std::size_t i = 0; i < m.measuredR.size(); ++i) {
    const bool ok = m.measuredR[i] <= m.stepBounds[i] + boundTol(cfg);
    pass = pass && ok;
    steps.push_back(json{{"n", i + 1}, {"R", m.measuredR[i]}, {"bound", m.stepBounds[i]}, {"pass", ok}});
  }
  json r = header(cfg);
  r["valid"] = valid;
  r["length"] = m.decomposition.size();
  r["unreachedDim"] = m.unreachedDim;
  r["skippedCandidates"] = m.skippedCandidates;
  r["steps"] = steps;
  r["decomposition"] = decompositionToJson(m.decomposition);
  r["pass"] = pass;
  return {dumpJson(r), pass ? 0 : 2};
}

Outcome runConv(const Config& cfg) {
  const DecompositionFile f = loadInput(cfg);
  const Vector& x = pickVector(f, cfg.vectorName);
  const std::vector<ConvStep> steps = convApproximation(f.decomposition, x, estimateOptions(cfg));
  bool pass = true;
  json rows = json::array();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const ConvStep& s = steps[i];
    const bool ok = s.error < s.bound;
    pass = pass && ok;
    rows.push_back(json{{"k", i + 1},
                        {"cut", s.cut},
                        {"error", s.error},
                        {"bound", s.bound},
                        {"partialNorm", s.partialNorm},
                        {"correctorNorm", norm(s.corrector, f.decomposition.model())},
                        {"pass", ok}});
  }
  json r = header(cfg);
  r["vector"] = cfg.vectorName;
  r["steps"] = rows;
  r["pass"] = pass;
  return {dumpJson(r), pass ? 0 : 2};
}

json claimResultsJson(const std::vector<ClaimResult>& results, bool& pass) {
  json rows = json::array();
  pass = true;
  for (const ClaimResult& c : results) {
    pass = pass && c.pass;
    json row = claimToJson(c.claim);
    row["tolerance"] = c.tolerance;
    row["value"] = c.value;
    row["exact"] = c.exact;
    row["pass"] = c.pass;
    rows.push_back(std::move(row));
  }
  return rows;
}

int caseSize(const Config& cfg, const std::string& name) {
  if (name == "james" || name == "james-permuted") return cfg.k.value_or(cfg.n.value_or(4));
  if (!cfg.n) throw ParameterError("--n is required for case '" + name + "'");
  return *cfg.n;
}

Outcome runExample(const Config& cfg) {
  const int size = caseSize(cfg, cfg.caseName);
  const GalleryCase gc = galleryCase(cfg.caseName, size);
  if (cfg.manifest) return {dumpJson(claimsManifest(gc)), 0};
  if (!cfg.claims) {
    return {dumpJson(decompositionToJson(gc.primary(), gc.vectors)), 0};
  }
  bool pass = true;
  json r = header(cfg);
  r["case"] = gc.name;
  r["params"] = gc.params;
  r["claims"] = claimResultsJson(evaluateClaims(gc, estimateOptions(cfg), cfg.tolClaim), pass);
  r["pass"] = pass;
  return {dumpJson(r), pass ? 0 : 2};
}

Outcome runClaims(const Config& cfg) {
  if (cfg.input.empty()) throw ParseError("--input is required for 'claims'");
  const json m = parseJsonText(readFile(cfg.input));
  if (!m.is_object() || !m.contains("case") || !m.contains("params") || !m.contains("claims")) {
    throw ParseError("claims manifest needs fields case, params, claims");
  }
  const std::string name = m.at("case").get<std::string>();
  const json& params = m.at("params");
  int size = 0;
  if (params.contains("N")) size = params.at("N").get<int>();
  if (params.contains("K")) size = params.at("K").get<int>();
  std::string caseName = name == "permuted" ? "permuted-reversal" : name;
  GalleryCase gc = galleryCase(caseName, size);
  gc.claims.clear();
  for (const json& c : m.at("claims")) {
    try {
      gc.claims.push_back(Claim{c.at("id").get<std::string>(), c.at("operation").get<std::string>(),
                                c.at("args"), c.at("relation").get<std::string>(),
                                c.at("expected").get<double>(), c.at("tolerance").get<double>(),
                                c.value("quote", std::string())});
    } catch (const json::exception& e) {
      throw ParseError(std::string("claims manifest: ") + e.what());
    }
  }
  bool pass = true;
  json r = header(cfg);
  r["case"] = gc.name;
  r["params"] = gc.params;
  r["claims"] = claimResultsJson(evaluateClaims(gc, estimateOptions(cfg), cfg.tolClaim), pass);
  r["pass"] = pass;
  return {dumpJson(r), pass ? 0 : 2};
}

Outcome dispatch(const Config& cfg) {
  if (cfg.command == "norm") return runNorm(cfg);
  if (cfg.command == "validate") return runValidate(cfg);
  if (cfg.command == "constants") return runConstants(cfg);
  if (cfg.command == "block") return runBlock(cfg);
  if (cfg.command == "dual-block") return runDualBlock(cfg);
  if (cfg.command == "mazur") return runMazur(cfg);
  if (cfg.command == "conv") return runConv(cfg);
  if (cfg.command == "example") return runExample(cfg);
  if (cfg.command == "claims") return runClaims(cfg);
  throw ParameterError("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional decomposition lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Config cfg;

  app.add_option("--input", cfg.input, "Input document");
  app.add_option("--output", cfg.output, "Report path (default: stdout)");
  app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized estimators (fallback: DECOMP_LAB_SEED)");
  app.add_option("--tol-rank", cfg.tolRank, "Relative rank tolerance");
  app.add_option("--tol-claim", cfg.tolClaim, "Tolerance override for claims and certified bounds");
  app.add_option("--n", cfg.n, "Size parameter");
  app.add_option("--k", cfg.k, "Block count parameter");
  app.add_option("--c", cfg.c, "Norming constant for greedy blocking");
  app.add_option("--eps", cfg.eps, "Epsilon for blocking procedures");
  app.add_option("--window", cfg.window, "Window for the limsup proxy (0: last third)");
  app.add_option("--budget", cfg.budget, "Random candidates per estimate");
  app.add_option("--vector", cfg.vectorName, "Vector name for conv");

  const std::pair<const char*, const char*> commands[] = {
      {"norm", "Norms of the named vectors"},
      {"validate", "Check totality, minimality and the tail"},
      {"constants", "Skipped projection norms and the constants K"},
      {"block", "Greedy blocking with bound c/(1-3 eps c)"},
      {"dual-block", "Blocking of the dual system with bound (1+eps)/(1-eps)"},
      {"mazur", "Inductive construction from candidate vectors"},
      {"conv", "Convergent approximation of a named vector"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  CLI::App* example = app.add_subcommand("example", "Build a gallery case")->fallthrough();
  example->add_option("case", cfg.caseName, "badddd | sbd-not-fdd | james | permuted-reversal | james-permuted")
      ->required();
  example->add_flag("--claims", cfg.claims, "Evaluate the case's claims");
  example->add_flag("--manifest", cfg.manifest, "Print the claims manifest");
  app.add_subcommand("claims", "Evaluate a claims manifest")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  Outcome out;
  try {
    out = dispatch(cfg);
  } catch (const ParseError& e) {
    std::cerr << "decomp-lab: input error: " << e.what() << "\n";
    return 1;
  } catch (const dlab::Error& e) {
    std::cerr << "decomp-lab: " << e.what() << "\n";
    return 1;
  }
  if (cfg.output.empty()) {
    std::cout << out.text;
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
      std::cerr << "decomp-lab: cannot write " << cfg.output << "\n";
      return 1;
    }
    f << out.text;
  }
  return out.exitCode;
}
