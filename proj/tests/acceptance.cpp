// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "decomplab/blocking.hpp"
#include "decomplab/gallery.hpp"
#include "decomplab/io.hpp"
#include "oracles.hpp"

using namespace dlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome jamesNormCorrectness() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  double worst = 0.0;
  Vector v(6);
  for (int code = 0; code < 729; ++code) {
    int c = code;
    for (int i = 0; i < 6; ++i, c /= 3) v(i) = c % 3 - 1;
    const double j = jamesNorm(v);
    worst = std::max(worst, std::abs(j * j - oracle::jamesSqBrute(v)));
  }
  Lcg64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Vector r = oracle::randomVector(rng, 1 + static_cast<int>(rng.below(12)));
    const double j = jamesNorm(r);
    worst = std::max(worst, std::abs(j * j - oracle::jamesSqBrute(r)));
  }
  const double s = seconds(t0);
  o.pass = worst <= 1e-12 && s < 10.0;
  o.detail = "1729 vectors, max |DP^2 - brute| " + fmt("%.3g", worst) + ", " + fmt("%.2f", s) + " s";
  return o;
}

Outcome jamesAnchor() {
  Outcome o;
  double worst = 0.0;
  for (int K = 3; K <= 10; ++K) {
    worst = std::max(worst, std::abs(jamesNorm(jamesPermutation(K).vector("x")) - 1.0));
  }
  o.pass = worst <= 1e-10;
  o.detail = "K = 3..10, max |norm(x) - 1| " + fmt("%.3g", worst);
  return o;
}

Outcome jamesGrowth() {
  Outcome o;
  const GalleryCase gc = jamesPermutation(10);
  int checked = 0, statedMisses = 0;
  std::string log;
  for (const Claim& c : gc.claims) {
    if (c.id.rfind("growth.", 0) != 0) continue;
    const ClaimResult r = evaluateClaim(gc, c);
    if (c.relation == "observe") {
      if (r.value < c.expected) ++statedMisses;
      std::printf("    %-20s DP %.6f  stated %.6f\n", c.id.c_str(), r.value, c.expected);
      continue;
    }
    ++checked;
    if (!r.pass) {
      o.pass = false;
      log += " " + c.id;
    }
  }
  o.pass = o.pass && checked > 0;
  o.detail = std::to_string(checked) + " cuts, k = 4..10" + (o.pass ? "" : ", failed:" + log) +
             "; stated constant missed at " + std::to_string(statedMisses) + " cuts (logged only)";
  return o;
}

Outcome badddCase() {
  Outcome o;
  const GalleryCase gc = dlab::badddd(200);
  const Decomposition& d = gc.primary();
  int bad = 0;
  for (int n = 1; n <= 100; ++n) {
    if (!(applyPartialSum(d, n, gc.vector("x")).norm() > n)) ++bad;
    if (applyCoordinateProjection(d, n, gc.vector("e1")).norm() > 1e-9) ++bad;
  }
  std::vector<double> c;
  for (int N : {10, 25, 50, 100, 200}) c.push_back(normingConstant(dlab::badddd(N).primary(), 1).value);
  bool monotone = true;
  for (std::size_t i = 1; i < c.size(); ++i) monotone = monotone && c[i] >= c[i - 1];
  o.pass = bad == 0 && monotone && c.back() > 10.0;
  o.detail = "N = 200: " + std::to_string(bad) + " violations; norming constants";
  for (double v : c) o.detail += fmt(" %.4g", v);
  return o;
}

Outcome sbd() {
  Outcome o;
  int total = 0, failed = 0;
  double worstBlocked = 0.0;
  for (int N = 4; N <= 40; N += 2) {
    const GalleryCase gc = sbdNotFdd(N);
    for (const ClaimResult& r : evaluateClaims(gc)) {
      ++total;
      if (!r.pass) ++failed;
    }
    std::vector<int> cuts;
    for (int i = 2; i <= N; i += 2) cuts.push_back(i);
    if (N % 2) cuts.push_back(N);
    const Decomposition b = applyBlocking(gc.primary(), Blocking{cuts});
    for (int n = 1; n <= b.size(); ++n) {
      worstBlocked = std::max(worstBlocked, std::abs(spectralNorm(partialSum(b, n)) - 1.0));
    }
  }
  o.pass = failed == 0 && worstBlocked <= 1e-8;
  o.detail = "N = 4..40: " + std::to_string(total - failed) + "/" + std::to_string(total) +
             " claims; blocked max |‖P_n‖ - 1| " + fmt("%.3g", worstBlocked);
  return o;
}

Outcome lemmas() {
  Outcome o;
  Lcg64 rng(2026);
  long checks = 0, violations = 0;
  for (int t = 0; t < 500; ++t) {
    const Decomposition d = oracle::randomDecomposition(rng, 12, 6);
    const int L = d.size();
    for (int k = 2; k <= L; ++k) {
      const Vector w = d.span(1, k - 1) * oracle::randomVector(rng, d.offset(k));
      for (int j = k; j <= L; ++j) {
        const double r = skippedNorm(d, k, j).value;
        ++checks;
        if (w.norm() > r * quotientNorm(d, 1, j, w).value + 1e-8) ++violations;
        const NormingFunctional y = normingFunctional(d, w, j);
        ++checks;
        if (std::abs(y.functional.norm() - 1.0) > 1e-8 ||
            w.norm() > r * std::abs(w.dot(y.functional)) + 1e-8) {
          ++violations;
        }
      }
    }
    const Vector x = d.basis() * oracle::randomVector(rng, d.totalDim());
    for (int k = 1; k <= L; ++k) {
      const double r = skippedNorm(d, k, k).value;
      const double delta = oracle::l2Distance(x, d.span(1, k - 1));
      ++checks;
      if (x.norm() > r * applyPartialSum(d, k, x).norm() + delta * (1 + r) + 1e-8) ++violations;
    }
  }
  o.pass = violations == 0;
  o.detail = "500 decompositions, " + std::to_string(checks) + " inequalities, " +
             std::to_string(violations) + " violations";
  return o;
}

bool monotoneTables(const Decomposition& d, const Vector& x) {
  const ConstantsReport rep = constantsReport(d);
  const int L = d.size();
  std::vector<std::vector<double>> q(L + 1, std::vector<double>(L + 1, 0.0));
  for (const QCell& c : quotientTable(d, x)) q[c.m][c.k] = c.norm;
  // Neighbour comparisons imply the full order relations.
  for (int m = 1; m <= L; ++m) {
    for (int k = m; k <= L; ++k) {
      if (m > 1 && rep.at(m - 1, k) > rep.at(m, k) + 1e-8) return false;
      if (k < L && rep.at(m, k + 1) > rep.at(m, k) + 1e-8) return false;
      if (m > 1 && q[m][k] > q[m - 1][k] + 1e-8) return false;
      if (k < L && q[m][k] > q[m][k + 1] + 1e-8) return false;
    }
  }
  return true;
}

Outcome monotonicity() {
  Outcome o;
  int cases = 0;
  std::string failed;
  auto check = [&](const std::string& label, const Decomposition& d, const Vector& x) {
    ++cases;
    if (!monotoneTables(d, x)) failed += " " + label;
  };
  for (int N : {10, 25, 50, 100, 200}) {
    const GalleryCase gc = dlab::badddd(N);
    check("badddd" + std::to_string(N), gc.primary(), gc.vector("x"));
  }
  for (int N = 4; N <= 40; N += 2) {
    const GalleryCase gc = sbdNotFdd(N);
    check("sbd" + std::to_string(N), gc.primary(), Vector::LinSpaced(N, 1.0, 2.0));
  }
  for (int K = 3; K <= 10; ++K) {
    const GalleryCase gc = jamesPermutation(K);
    const Decomposition& g = gc.decomposition("grouped");
    if (g.coordDim() > 32) continue;
    check("james" + std::to_string(K), gc.decomposition("singletons"), gc.vector("x"));
    check("james-grouped" + std::to_string(K), g, gc.vector("x"));
  }
  for (int N : {4, 8, 16}) {
    const GalleryCase gc = galleryCase("permuted-reversal", N);
    check("reversal" + std::to_string(N), gc.primary(), Vector::Ones(N));
  }
  o.pass = failed.empty();
  o.detail = std::to_string(cases) + " decompositions" + (failed.empty() ? "" : ", failed:" + failed);
  return o;
}

Outcome mazur() {
  Outcome o;
  Lcg64 rng(8);
  int steps = 0, bad = 0;
  double worst = -1e9;
  for (int t = 0; t < 50; ++t) {
    std::vector<Vector> cands;
    for (int i = 0; i < 10; ++i) cands.push_back(oracle::randomVector(rng, 8));
    std::vector<double> schedule;
    for (int n = 1; n <= 10; ++n) schedule.push_back(std::ldexp(1.0, -n));
    const MazurResult r = mazurConstruct(cands, NormModel::l2(), schedule);
    if (!validate(r.decomposition).valid() || r.unreachedDim != 0) ++bad;
    for (std::size_t i = 0; i < r.measuredR.size(); ++i) {
      ++steps;
      worst = std::max(worst, r.measuredR[i] - r.stepBounds[i]);
      if (r.measuredR[i] > r.stepBounds[i] + 1e-6) ++bad;
    }
  }
  o.pass = bad == 0;
  o.detail = "50 candidate sets, " + std::to_string(steps) + " steps, max ‖R‖ - (1+eps_n) " + fmt("%.3g", worst);
  return o;
}

Outcome blockingCertificates() {
  Outcome o;
  int runs = 0, failed = 0;
  auto evalCase = [&](const GalleryCase& gc) {
    for (const Claim& c : gc.claims) {
      if (c.operation != "greedyBlockingCertificate" && c.operation != "dualBlockingCertificate") continue;
      const ClaimResult r = evaluateClaim(gc, c);
      if (!std::isfinite(r.value)) continue;  // unsuccessful run, nothing to certify
      ++runs;
      if (r.value > c.expected + 1e-6) ++failed;
    }
  };
  for (int N : {10, 25, 50, 100, 200}) evalCase(dlab::badddd(N));
  for (int K = 3; K <= 10; ++K) evalCase(jamesPermutation(K));
  for (int N : {4, 8, 16}) evalCase(galleryCase("permuted-reversal", N));
  for (int K = 3; K <= 4; ++K) evalCase(galleryCase("james-permuted", K));

  const GalleryCase gc = dlab::badddd(50);
  const GreedyBlockingResult g = greedyBlocking(gc.primary(), 10.0, 0.01);
  const bool failureReport = !g.success && g.witness.size() == 50 &&
                             std::abs(g.witness.norm() - 1.0) < 1e-9 && g.pairing <= 0.1 - 0.01 &&
                             g.failedAt >= 1 && !g.message.empty();
  o.pass = failed == 0 && runs > 0 && failureReport;
  o.detail = std::to_string(runs) + " successful runs, " + std::to_string(failed) +
             " above bound; badddd N = 50, c = 10: " +
             (failureReport ? "failure report at cut " + std::to_string(g.failedAt) + ", pairing " +
                                  fmt("%.4g", g.pairing)
                            : std::string("no failure report"));
  return o;
}

Outcome conv() {
  Outcome o;
  Lcg64 rng(10);
  int steps = 0, bad = 0;
  auto run = [&](const Decomposition& d, const Vector& x) {
    for (const ConvStep& s : convApproximation(d, x)) {
      ++steps;
      if (!(s.error < s.bound)) ++bad;
    }
  };
  for (int t = 0; t < 100; ++t) {
    const Decomposition d = oracle::randomDecomposition(rng, 12, 6);
    run(d, d.basis() * oracle::randomVector(rng, d.totalDim()));
  }
  const GalleryCase gc = dlab::badddd(50);
  run(gc.primary(), gc.vector("x"));
  o.pass = bad == 0;
  o.detail = "101 pairs, " + std::to_string(steps) + " steps, " + std::to_string(bad) + " at or above 2*2^-k";
  return o;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> cliGrid(const fs::path& dir) {
  std::vector<std::string> cmds;
  for (int N : {10, 25, 50, 100, 200}) cmds.push_back("example badddd --n " + std::to_string(N) + " --claims");
  for (int N = 4; N <= 40; N += 2) cmds.push_back("example sbd-not-fdd --n " + std::to_string(N) + " --claims");
  for (int K = 3; K <= 10; ++K) cmds.push_back("example james --k " + std::to_string(K) + " --claims");
  const std::string in = (dir / "input_badddd50.json").string();
  cmds.push_back("constants --input " + in + " --format csv");
  cmds.push_back("constants --input " + in);
  cmds.push_back("block --input " + in + " --c 10 --eps 0.01");
  cmds.push_back("dual-block --input " + in + " --eps 0.25");
  cmds.push_back("conv --input " + in);
  cmds.push_back("mazur --n 8");
  return cmds;
}

Outcome determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const fs::path base = fs::temp_directory_path() / ("decomp_lab_acceptance_" + std::to_string(::getpid()));
  std::vector<fs::path> dirs{base / "run1", base / "run2"};
  std::size_t reports = 0;
  int unexpected = 0;
  for (const fs::path& dir : dirs) {
    fs::create_directories(dir);
    shell(std::string(DECOMP_LAB_EXE) + " example badddd --n 50 --output " + (dir / "input_badddd50.json").string());
    const std::vector<std::string> cmds = cliGrid(dir);
    reports = cmds.size();
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      const fs::path out = dir / ("report_" + std::to_string(i) + ".txt");
      const int code = shell(std::string(DECOMP_LAB_EXE) + " " + cmds[i] + " --seed 0 --output " + out.string());
      const int expected = cmds[i].rfind("block --input", 0) == 0 ? 2 : 0;
      if (code != expected) ++unexpected;
    }
  }
  int differ = 0;
  for (std::size_t i = 0; i < reports; ++i) {
    const std::string name = "report_" + std::to_string(i) + ".txt";
    const std::string a = slurp(dirs[0] / name), b = slurp(dirs[1] / name);
    if (a.empty() || a != b) ++differ;
  }
  fs::remove_all(base);
  const double s = seconds(t0);
  o.pass = differ == 0 && unexpected == 0 && s < 300.0;
  o.detail = std::to_string(reports) + " reports x 2 runs, " + std::to_string(differ) + " differ, " +
             std::to_string(unexpected) + " unexpected exit codes, " + fmt("%.1f", s) + " s";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"James norm DP matches brute force", jamesNormCorrectness},
      {"James example vector has norm one", jamesAnchor},
      {"James example partial sums grow", jamesGrowth},
      {"badddd partial sums exceed n, norming constant diverges", badddCase},
      {"SBD that is not an FDD", sbd},
      {"Projection estimates on random decompositions", lemmas},
      {"Monotonicity of R and quotient tables", monotonicity},
      {"Mazur construction", mazur},
      {"Greedy and dual blocking certificates", blockingCertificates},
      {"Convergent approximation errors", conv},
      {"End-to-end CLI determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
