#include "decomplab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dlab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(what + " (at " + (path.empty() ? "/" : path) + ")");
}

double realAt(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite number");
  return v;
}

int intAt(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

// Matrix stored as a list of rows.
json matrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrixFromJson(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) fail(path + "/0", "expected a row list");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    if (!j[i].is_array()) fail(rp, "expected a row list");
    if (j[i].size() != cols) fail(rp, "ragged row");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = realAt(j[i][c], rp + "/" + std::to_string(c));
  }
  return m;
}

json vectorToJson(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vectorFromJson(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = realAt(j[i], path + "/" + std::to_string(i));
  return v;
}

}  // namespace

json modelToJson(const NormModel& model) {
  switch (model.kind()) {
    case NormModel::Kind::James:
      return "james";
    case NormModel::Kind::Weighted:
      return json{{"weighted", matrixToJson(model.weight())}};
    case NormModel::Kind::Lp:
      break;
  }
  if (std::isinf(model.p())) return json{{"lp", "inf"}};
  return json{{"lp", model.p()}};
}

NormModel modelFromJson(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "james") return NormModel::james();
    fail("/model", "unknown model name");
  }
  if (!j.is_object() || j.size() != 1) fail("/model", "expected \"james\", {\"lp\": p} or {\"weighted\": rows}");
  if (j.contains("lp")) {
    const json& p = j.at("lp");
    if (p.is_string() && p.get<std::string>() == "inf") return NormModel::linf();
    const double v = realAt(p, "/model/lp");
    if (!(v >= 1.0)) fail("/model/lp", "p must be >= 1");
    return NormModel::lp(v);
  }
  if (j.contains("weighted")) return NormModel::weighted(matrixFromJson(j.at("weighted"), "/model/weighted"));
  fail("/model", "unknown model");
}

json decompositionToJson(const Decomposition& d, const std::map<std::string, Vector>& vectors) {
  json out;
  out["ambientDim"] = d.ambientDim();
  out["model"] = modelToJson(d.model());
  json spaces = json::array();
  for (const Subspace& s : d.spaces()) spaces.push_back(matrixToJson(s.basis()));
  out["spaces"] = std::move(spaces);
  if (d.hasExplicitTail()) {
    json t = json::array();
    for (Eigen::Index i = 0; i < d.tail().rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < d.tail().cols(); ++c) row.push_back(d.tail()(i, c));
      t.push_back(std::move(row));
    }
    out["tail"] = std::move(t);
  }
  if (!vectors.empty()) {
    json v = json::object();
    for (const auto& [name, vec] : vectors) v[name] = vectorToJson(vec);
    out["vectors"] = std::move(v);
  }
  return out;
}

DecompositionFile decompositionFromJson(const json& j) {
  if (!j.is_object()) fail("", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "ambientDim" && key != "model" && key != "spaces" && key != "tail" &&
        key != "vectors") {
      fail("/" + key, "unknown field");
    }
  }
  if (!j.contains("spaces")) fail("", "missing field \"spaces\"");
  if (!j.contains("model")) fail("", "missing field \"model\"");
  const NormModel model = modelFromJson(j.at("model"));
  const json& sj = j.at("spaces");
  if (!sj.is_array() || sj.empty()) fail("/spaces", "expected a non-empty list of bases");
  std::vector<Subspace> spaces;
  int coordDim = -1;
  for (std::size_t n = 0; n < sj.size(); ++n) {
    const std::string path = "/spaces/" + std::to_string(n);
    Matrix b = matrixFromJson(sj[n], path);
    if (coordDim >= 0 && b.rows() != coordDim) fail(path, "coordinate dimension differs from /spaces/0");
    coordDim = static_cast<int>(b.rows());
    try {
      spaces.emplace_back(std::move(b));
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  std::optional<int> ambient;
  if (j.contains("ambientDim")) ambient = intAt(j.at("ambientDim"), "/ambientDim");
  std::optional<Matrix> tail;
  if (j.contains("tail")) {
    const json& tj = j.at("tail");
    if (!tj.is_array() || static_cast<int>(tj.size()) != coordDim) {
      fail("/tail", "expected one row per coordinate");
    }
    if (tj.empty() || tj[0].empty()) {
      tail = Matrix(coordDim, 0);
    } else {
      tail = matrixFromJson(tj, "/tail");
    }
  }
  std::map<std::string, Vector> vectors;
  if (j.contains("vectors")) {
    const json& vj = j.at("vectors");
    if (!vj.is_object()) fail("/vectors", "expected an object of named vectors");
    for (const auto& [name, value] : vj.items()) {
      Vector v = vectorFromJson(value, "/vectors/" + name);
      if (v.size() != coordDim) fail("/vectors/" + name, "length differs from coordinate dimension");
      vectors.emplace(name, std::move(v));
    }
  }
  try {
    return DecompositionFile{Decomposition(std::move(spaces), model, ambient, std::move(tail)),
                             std::move(vectors)};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail("", e.what());
  }
}

json parseJsonText(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    const std::size_t at = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw ParseError(pos == std::string::npos ? what : what.substr(pos), line, col);
  }
}

DecompositionFile parseDecomposition(const std::string& text) {
  return decompositionFromJson(parseJsonText(text));
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DecompositionFile readDecomposition(const std::string& path) {
  return parseDecomposition(readFile(path));
}

json blockingToJson(const Blocking& b) { return json{{"cuts", b.cuts}}; }

Blocking blockingFromJson(const json& j) {
  if (!j.is_object() || !j.contains("cuts") || !j.at("cuts").is_array()) {
    fail("/cuts", "expected {\"cuts\": [...]}");
  }
  Blocking b;
  const json& c = j.at("cuts");
  for (std::size_t i = 0; i < c.size(); ++i) b.cuts.push_back(intAt(c[i], "/cuts/" + std::to_string(i)));
  return b;
}

json constantsToJson(const ConstantsReport& r) {
  json cells = json::array();
  for (const RCell& c : r.rTable) cells.push_back(json{{"m", c.m}, {"k", c.k}, {"norm", c.norm}});
  return json{{"len", r.len},
              {"window", r.window},
              {"K", r.K},
              {"KInfProxy", r.KInfProxy},
              {"KInfInfProxy", r.KInfInfProxy},
              {"kInfInfAt", {r.kInfInfM, r.kInfInfK}},
              {"exact", r.exact},
              {"rTable", std::move(cells)}};
}

ConstantsReport constantsFromJson(const json& j) {
  try {
    ConstantsReport r;
    r.len = j.at("len").get<int>();
    r.window = j.at("window").get<int>();
    r.K = j.at("K").get<double>();
    r.KInfProxy = j.at("KInfProxy").get<double>();
    r.KInfInfProxy = j.at("KInfInfProxy").get<double>();
    r.kInfInfM = j.at("kInfInfAt").at(0).get<int>();
    r.kInfInfK = j.at("kInfInfAt").at(1).get<int>();
    r.exact = j.at("exact").get<bool>();
    for (const json& c : j.at("rTable")) {
      r.rTable.push_back({c.at("m").get<int>(), c.at("k").get<int>(), c.at("norm").get<double>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("constants report: ") + e.what());
  }
}

std::string formatReal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string constantsToCsv(const ConstantsReport& r) {
  std::string out = "m,k,norm\n";
  for (const RCell& c : r.rTable) {
    out += std::to_string(c.m) + "," + std::to_string(c.k) + "," + formatReal(c.norm) + "\n";
  }
  return out;
}

std::vector<RCell> constantsFromCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 1;
  if (!std::getline(in, line) || line != "m,k,norm") throw ParseError("expected header m,k,norm", 1, 1);
  std::vector<RCell> cells;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    RCell c;
    char* end = nullptr;
    const char* s = line.c_str();
    c.m = static_cast<int>(std::strtol(s, &end, 10));
    if (end == s || *end != ',') throw ParseError("expected integer m", lineNo, 1);
    const char* k = end + 1;
    c.k = static_cast<int>(std::strtol(k, &end, 10));
    if (end == k || *end != ',') throw ParseError("expected integer k", lineNo, static_cast<int>(k - s) + 1);
    const char* v = end + 1;
    c.norm = std::strtod(v, &end);
    if (end == v || *end != '\0') throw ParseError("expected real norm", lineNo, static_cast<int>(v - s) + 1);
    cells.push_back(c);
  }
  return cells;
}

json claimToJson(const Claim& c) {
  return json{{"id", c.id},           {"operation", c.operation}, {"args", c.args},
              {"relation", c.relation}, {"expected", c.expected},   {"tolerance", c.tolerance},
              {"quote", c.quote}};
}

json claimsManifest(const GalleryCase& gc) {
  json claims = json::array();
  for (const Claim& c : gc.claims) claims.push_back(claimToJson(c));
  return json{{"case", gc.name}, {"params", gc.params}, {"claims", std::move(claims)}};
}

std::string dumpJson(const json& j) { return j.dump(2) + "\n"; }

}  // namespace dlab
