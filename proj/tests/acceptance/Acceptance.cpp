//===-- Acceptance.cpp - End-to-end acceptance criteria -------------------===//
//
// One PASS/FAIL line per criterion; exit status is the number of failures.
// Expected values come from the concrete interpreter, brute-force
// enumeration, or hand-written constants, never from the engine itself.
//
//===----------------------------------------------------------------------===//

#include "Corpus.h"
#include "Interpreter.h"
#include "Oracle.h"
#include "RandomFormula.h"
#include "RandomStraightLine.h"

#include "symdeffix/Parser.h"
#include "symdeffix/Printer.h"
#include "symdeffix/Repair.h"

#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace symdeffix;
using namespace symdeffix::testing;

namespace {

struct Failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string &what) {
  if (!ok)
    throw Failed(what);
}

std::string readText(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// 1-based line of the first occurrence of `needle` in `text`.
int lineOf(const std::string &text, const std::string &needle) {
  size_t at = text.find(needle);
  if (at == std::string::npos)
    return 0;
  return 1 + int(std::count(text.begin(), text.begin() + long(at), '\n'));
}

RepairOptions quietOptions(RepairMode mode = RepairMode::AllPaths) {
  RepairOptions o;
  o.mode = mode;
  o.writeArtifacts = false;
  return o;
}

RepairReport repairFile(const std::string &path, const RepairOptions &o) {
  return repairProgram(parseFile(path), path, o);
}

/// Symex on an already instrumented program text, default bounds.
ExecutionResult reverify(const std::string &source, const ExecBounds &b) {
  Program p = parse(source, "reverify.c");
  Instrumented in = instrument(std::move(p), b.classes);
  return detect(in, b);
}

size_t concreteCrashes(const std::string &source, int64_t lo, int64_t hi) {
  Program p = parse(source, "concrete.c");
  size_t arity = countNondetCalls(p);
  size_t n = 0;
  forEachInput(arity, lo, hi, [&](const std::vector<int64_t> &v) {
    if (Interpreter(p, v).run().crash)
      ++n;
  });
  return n;
}

/// Test-side lowering of a guard to the s-expression syntax. Fixed arrays
/// are resolved by scanning declarations.
class SexprOf {
public:
  explicit SexprOf(const Program &p) {
    ProgramIndex idx(p);
    for (NodeId id : idx.allIds())
      if (const Stmt *s = idx.stmt(id))
        if (s->kind == StmtKind::Decl && s->declType == DeclType::Array)
          arrays_[s->name] = s->arraySize;
  }

  std::string operator()(const Expr &e) const {
    switch (e.kind) {
    case ExprKind::IntLit:
      return std::to_string(e.value);
    case ExprKind::Var:
      return e.name;
    case ExprKind::SizeOf:
      return std::to_string(arrays_.at(e.name));
    case ExprKind::Unary:
      return e.unOp == UnOp::Neg ? "(- 0 " + (*this)(*e.operands[0]) + ")"
                                 : "(not " + (*this)(*e.operands[0]) + ")";
    case ExprKind::Binary: {
      static const std::map<BinOp, std::string> ops = {
          {BinOp::Add, "+"},  {BinOp::Sub, "-"},  {BinOp::Lt, "<"},
          {BinOp::Le, "<="},  {BinOp::Gt, ">"},   {BinOp::Ge, ">="},
          {BinOp::Eq, "="},   {BinOp::Ne, "distinct"}, {BinOp::And, "and"},
          {BinOp::Or, "or"}};
      return "(" + ops.at(e.binOp) + " " + (*this)(e.lhs()) + " " +
             (*this)(e.rhs()) + ")";
    }
    default:
      throw Failed("guard uses an unexpected construct");
    }
  }

private:
  std::map<std::string, int64_t> arrays_;
};

const Stmt *firstLoop(const Program &p) {
  ProgramIndex idx(p);
  for (NodeId id : idx.allIds())
    if (const Stmt *s = idx.stmt(id))
      if (s->kind == StmtKind::For)
        return s;
  return nullptr;
}

//===----------------------------------------------------------------------===//

std::string flagship() {
  std::string path = corpusPath("heap_overflow.c");
  std::string text = readText(path);
  RepairReport r = repairFile(path, quietOptions());
  require(r.verdict == RepairVerdict::Repaired, "verdict " +
                                                    std::string(toString(r.verdict)));
  require(r.crashReports.size() == 1, "expected one crash report");
  auto j = nlohmann::json::parse(emitReport(r));
  const auto &cr = j["crash_reports"][0];
  require(cr["cfc"] == "access(buffer) < base(buffer)+size(buffer)",
          "cfc " + cr["cfc"].dump());
  require(cr["trace"].dump() == R"([["IN","main"]])", "trace " + cr["trace"].dump());
  int copyLine = lineOf(text, "buffer[i] = 65");
  require(cr["crash_line"] == copyLine, "crash line " + cr["crash_line"].dump() +
                                            " vs copy loop " +
                                            std::to_string(copyLine));
  bool anyVerified = false;
  for (const auto &p : r.patches)
    anyVerified |= p.patch.verified;
  require(anyVerified, "no verified patch");

  Program repaired = parse(r.repairedSource, "repaired.c");
  const Stmt *loop = firstLoop(repaired);
  require(loop && loop->cond, "repaired program has no loop");
  std::string guard = SexprOf(repaired)(*loop->cond);
  std::string want =
      "(and (< i 10) (< i GLOBAL_MS__heap_overflow__malloc_7))";
  std::string iff = "(and (or (not " + guard + ") " + want + ") (or (not " +
                    want + ") " + guard + "))";
  ValidityResult v = Solver().checkValid(parseConstraint(iff));
  require(v.verdict == Validity::Valid, "guard " + printExpr(*loop->cond) +
                                            " not equivalent to the reference");
  require(reverify(r.repairedSource, {}).reports.empty(),
          "repaired program still crashes");
  return "guard " + printExpr(*loop->cond);
}

std::string allPathsVsSingleTrace() {
  std::string path = corpusPath("two_path_overflow.c");
  RepairReport all = repairFile(path, quietOptions());
  require(all.verdict == RepairVerdict::Repaired, "all-paths verdict " +
                                                      std::string(toString(all.verdict)));
  require(reverify(all.repairedSource, {}).reports.empty(),
          "all-paths patch fails symbolic re-verification");
  require(concreteCrashes(all.repairedSource, -12, 12) == 0,
          "all-paths patch still crashes concretely");

  RepairReport one = repairFile(path, quietOptions(RepairMode::SingleTrace));
  require(one.verdict == RepairVerdict::Repaired, "single-trace verdict " +
                                                      std::string(toString(one.verdict)));
  require(exitCode(one.verdict) == 0, "single-trace exit code");
  require(!reverify(one.repairedSource, {}).reports.empty(),
          "single-trace patch unexpectedly passes all-paths re-verification");
  require(concreteCrashes(one.repairedSource, -12, 12) > 0,
          "single-trace patch shows no concrete crash");
  auto j = nlohmann::json::parse(emitReport(one));
  require(j["cross_mode_check"].is_object() &&
              j["cross_mode_check"]["all_paths_verified"] == false,
          "cross_mode_check does not record the discrepancy");
  auto k = nlohmann::json::parse(emitReport(all));
  require(k["cross_mode_check"].is_null(), "all-paths report has a cross-mode check");
  return "single-trace leaves " +
         std::to_string(one.crossMode->remainingReports) + " report(s)";
}

std::string oracleEquivalence() {
  size_t checked = 0;
  std::set<std::string> names;
  for (const auto &f : corpusFiles()) {
    Program original = parseFile(f);
    size_t arity = countNondetCalls(original);
    if (arity > 2)
      continue;
    Program inst;
    ExecutionResult r = runRestricted(original, 0, 7, inst);
    InputSet sym = symbolicFailures(r, arity, 0, 7);
    InputSet con = concreteFailures(original, 0, 7);
    require(sym == con, std::filesystem::path(f).filename().string() +
                            ": symbolic " + std::to_string(sym.size()) +
                            " vs concrete " + std::to_string(con.size()));
    names.insert(std::filesystem::path(f).filename().string());
    ++checked;
  }
  require(checked >= 10, "only " + std::to_string(checked) + " programs qualify");
  for (const char *must : {"safe.c", "heap_overflow.c", "two_path_overflow.c",
                           "negative_index.c", "div_by_zero.c"})
    require(names.count(must), std::string(must) + " not covered");
  return std::to_string(checked) + " programs";
}

std::string wpCorrectness() {
  std::mt19937 rng(2024);
  size_t states = 0;
  for (int t = 0; t < 200; ++t) {
    StraightLine sl = randomStraightLine(rng);
    Program p = parse(sl.source());
    Constraint q = parseConstraint(sl.postSexpr());
    const auto &stmts = p.functions[0].body->stmts;
    Constraint w = q;
    for (size_t i = stmts.size(); i-- > 3;) // the first three read inputs
      w = wpStmt(w, *stmts[i]);
    forEachState(sl.vars, -8, 8, [&](const std::array<int64_t, 3> &x) {
      Model m{{"x0", x[0]}, {"x1", x[1]}, {"x2", x[2]}};
      if (w.evaluate(m) != sl.post.eval(sl.run(x)))
        throw Failed("mismatch on\n" + sl.source());
      ++states;
    });
  }
  return "200 programs, " + std::to_string(states) + " states";
}

std::string solverExactness() {
  std::mt19937 rng(99);
  Solver s;
  size_t sat = 0;
  for (int n = 0; n < 1000; ++n) {
    RandomFormula rf = randomFormula(rng);
    std::string text = rf.sexpr();
    Constraint c = parseConstraint(text);
    auto oracle = rf.enumerate(64);
    SatResult r = s.checkSat(c);
    require(r.verdict != Verdict::Unknown, text + ": unknown");
    require((r.verdict == Verdict::Sat) == oracle.has_value(),
            text + ": solver " + toString(r.verdict));
    if (r.verdict == Verdict::Sat) {
      require(rf.eval(toVector(r.model)), text + ": model does not satisfy");
      ++sat;
    }
    // Validity: a counter-model must falsify; Valid means no point in the
    // box falsifies.
    ValidityResult v = s.checkValid(c);
    require(v.verdict != Validity::Unknown, text + ": validity unknown");
    RandomFormula neg = rf;
    RawFormula root;
    root.kind = RawFormula::Not;
    root.kids.push_back(rf.root);
    neg.root = root;
    auto falsifier = neg.enumerate(64);
    require((v.verdict == Validity::Invalid) == falsifier.has_value(),
            text + ": validity " + toString(v.verdict));
    if (v.verdict == Validity::Invalid)
      require(!rf.eval(toVector(v.counterModel)),
              text + ": counter-model satisfies");
  }
  return "1000 formulas, " + std::to_string(sat) + " sat";
}

std::string soundnessGate() {
  namespace fs = std::filesystem;
  fs::path out = fs::temp_directory_path() / "symdeffix-acceptance";
  fs::remove_all(out);
  size_t verified = 0;
  for (const auto &f : corpusFiles()) {
    std::string name = fs::path(f).filename().string();
    RepairOptions o;
    o.outDir = out.string();
    RepairReport r = runRepair(f, o);
    auto j = nlohmann::json::parse(readText(
        (out / (fs::path(f).stem().string() + ".report.json")).string()));
    bool any = false;
    for (const auto &p : j["patches"]) {
      if (p["verified"] == true) {
        any = true;
        ++verified;
      } else {
        require(p["diff"].is_null(), name + ": unverified patch carries a diff");
      }
    }
    bool diffFile = fs::exists(out / (fs::path(f).stem().string() + ".patch.diff"));
    require(diffFile == (r.verdict == RepairVerdict::Repaired),
            name + ": diff file does not match verdict");
    require(any == (r.verdict == RepairVerdict::Repaired),
            name + ": verified patches do not match verdict");
    if (!any)
      continue;
    // Same bounds, fresh parse of the repaired text.
    require(reverify(r.repairedSource, o.bounds).reports.empty(),
            name + ": verified patch fails re-verification");
    if (countNondetCalls(parse(r.repairedSource)) <= 3)
      require(concreteCrashes(r.repairedSource, -8, 8) == 0,
              name + ": verified patch crashes concretely");
  }
  fs::remove_all(out);
  return std::to_string(verified) + " verified patches";
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    std::string (*run)();
    double limitSeconds;
  };
  const Criterion criteria[] = {
      {1, "flagship reproduction", flagship, 10},
      {2, "all-paths vs single-trace", allPathsVsSingleTrace, 20},
      {3, "failing inputs match concrete execution", oracleEquivalence, 0},
      {4, "weakest precondition matches execution", wpCorrectness, 0},
      {5, "solver matches enumeration", solverExactness, 0},
      {6, "verified patches re-verify", soundnessGate, 0},
  };
  int failures = 0;
  for (const auto &c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception &e) {
      ok = false;
      detail = e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    if (ok && c.limitSeconds > 0 && secs > c.limitSeconds) {
      ok = false;
      detail += " (too slow)";
    }
    failures += ok ? 0 : 1;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": "
         << c.name << " [" << secs << "s] " << detail;
    std::cout << line.str() << std::endl;
  }
  return failures;
}
