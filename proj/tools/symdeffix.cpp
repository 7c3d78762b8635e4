//===-- symdeffix.cpp - Command-line driver -------------------------------===//
//
// symdeffix repair FILE [options]   full pipeline, writes report and diff
// symdeffix detect FILE [options]   crash reports only
// symdeffix instrument FILE         prints the instrumented program
// symdeffix parse FILE              prints the normalized program
// symdeffix solve FORMULA           satisfiability of an s-expression
//
//===----------------------------------------------------------------------===//

#include "symdeffix/Parser.h"
#include "symdeffix/Printer.h"
#include "symdeffix/Repair.h"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace symdeffix;

namespace {

struct Flags {
  std::string file;
  unsigned unroll = 64;
  size_t maxPaths = 4096;
  std::string errorClass = "all";
  bool singleTrace = false;
  unsigned maxExprSize = 9;
  size_t maxPatches = 5;
  long solverTimeoutMs = 2000;
  std::string outDir = "./tmp/";
  bool timings = false;
  bool quiet = false;
};

void addBoundFlags(CLI::App *cmd, Flags &f) {
  cmd->add_option("--unroll-bound", f.unroll, "Loop unrolling bound")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-paths", f.maxPaths, "Maximum explored paths")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--error-class", f.errorClass, "Checks to insert")
      ->check(CLI::IsMember({"heap-overflow", "divide-by-zero", "all"}));
  cmd->add_option("--solver-timeout-ms", f.solverTimeoutMs,
                  "Per-query solver timeout")
      ->check(CLI::PositiveNumber);
}

RepairOptions toOptions(const Flags &f) {
  RepairOptions o;
  o.bounds.unroll = f.unroll;
  o.bounds.maxPaths = f.maxPaths;
  o.bounds.solverTimeout = std::chrono::milliseconds(f.solverTimeoutMs);
  o.bounds.classes = ErrorClasses::parse(f.errorClass);
  o.errorClass = f.errorClass;
  o.mode = f.singleTrace ? RepairMode::SingleTrace : RepairMode::AllPaths;
  o.budget.maxExprSize = f.maxExprSize;
  o.budget.maxPatches = f.maxPatches;
  o.budget.solverTimeout = o.bounds.solverTimeout;
  o.outDir = f.outDir;
  o.emitTimings = f.timings;
  return o;
}

int doRepair(const Flags &f) {
  RepairReport r = runRepair(f.file, toOptions(f));
  if (f.quiet)
    return exitCode(r.verdict);
  std::cout << "verdict: " << toString(r.verdict) << "\n";
  for (const auto &c : r.crashReports)
    std::cout << "crash: line " << c.crashLine << " in " << c.function << ": "
              << c.cfc << " (" << c.failingPaths.size() << " failing path"
              << (c.failingPaths.size() == 1 ? "" : "s") << ")\n";
  for (const auto &p : r.patches)
    if (p.patch.verified)
      std::cout << "patch: line " << p.patch.loc.line << " "
                << toString(p.patch.tmpl) << " " << printExpr(*p.patch.expr)
                << "\n";
  if (r.crossMode)
    std::cout << "all-paths re-check: "
              << (r.crossMode->allPathsVerified ? "passed" : "failed") << " ("
              << r.crossMode->remainingReports << " crash reports remain)\n";
  if (r.verdict == RepairVerdict::Repaired)
    std::cout << r.diff;
  return exitCode(r.verdict);
}

int doDetect(const Flags &f) {
  RepairOptions o = toOptions(f);
  Program p = parseFile(f.file);
  Instrumented in = instrument(std::move(p), o.bounds.classes);
  ExecutionResult res = detect(in, o.bounds);
  for (const auto &c : res.reports) {
    std::cout << "CFC: " << c.cfc << "\nTrace:";
    for (const auto &e : c.trace)
      std::cout << " [" << e.kind << "," << e.function << "]";
    std::cout << "\nLine: " << c.crashLine << "\nFailing paths: "
              << c.failingPaths.size() << (c.unconfirmed ? " (unconfirmed)" : "")
              << "\n";
  }
  std::cout << "paths explored: " << res.pathsExplored
            << (res.boundHit ? " (bound hit)" : "") << "\n";
  return res.reports.empty() ? 1 : 0;
}

int doInstrument(const Flags &f) {
  Program p = parseFile(f.file);
  insertMallocGlobals(p);
  std::cout << printProgram(p);
  return 0;
}

int doParse(const Flags &f) {
  std::cout << printProgram(parseFile(f.file));
  return 0;
}

int doSolve(const std::string &formula, long timeoutMs) {
  SolverOptions so;
  so.timeout = std::chrono::milliseconds(timeoutMs);
  SatResult r = Solver(so).checkSat(parseConstraint(formula));
  std::cout << toString(r.verdict) << "\n";
  for (const auto &[sym, v] : r.model)
    std::cout << "  " << sym << " = " << v << "\n";
  if (!r.reason.empty())
    std::cout << "  (" << r.reason << ")\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bounded symbolic-execution repair for Mini-C programs"};
  app.require_subcommand(1);
  Flags f;

  CLI::App *repair = app.add_subcommand("repair", "Detect, repair and verify");
  repair->add_option("file", f.file, "Mini-C source")->required();
  addBoundFlags(repair, f);
  repair->add_flag("--single-trace", f.singleTrace,
                   "Repair from one failing path only");
  repair->add_option("--max-expr-size", f.maxExprSize, "Largest patch expression")
      ->check(CLI::PositiveNumber);
  repair->add_option("--max-patches", f.maxPatches, "Patches per location")
      ->check(CLI::PositiveNumber);
  repair->add_option("--out-dir", f.outDir, "Artifact directory");
  repair->add_flag("--timings", f.timings, "Add per-stage timings to the report");
  repair->add_flag("-q,--quiet", f.quiet, "No console summary");

  CLI::App *det = app.add_subcommand("detect", "Report crashes only");
  det->add_option("file", f.file, "Mini-C source")->required();
  addBoundFlags(det, f);

  CLI::App *ins = app.add_subcommand("instrument", "Print instrumented program");
  ins->add_option("file", f.file, "Mini-C source")->required();

  CLI::App *par = app.add_subcommand("parse", "Print normalized program");
  par->add_option("file", f.file, "Mini-C source")->required();

  std::string formula;
  CLI::App *solve = app.add_subcommand("solve", "Check an s-expression formula");
  solve->add_option("formula", formula, "e.g. \"(and (< x 3) (> x 1))\"")
      ->required();
  solve->add_option("--solver-timeout-ms", f.solverTimeoutMs, "Solver timeout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputErrorExit;
  }

  if (!*solve && !std::ifstream(f.file)) {
    std::cerr << "error: cannot read '" << f.file << "'\n";
    return kInputErrorExit;
  }
  try {
    if (*repair)
      return doRepair(f);
    if (*det)
      return doDetect(f);
    if (*ins)
      return doInstrument(f);
    if (*par)
      return doParse(f);
    return doSolve(formula, f.solverTimeoutMs);
  } catch (const SourceError &e) {
    std::cerr << f.file << ": " << e.what() << "\n";
    return kInputErrorExit;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputErrorExit;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return exitCode(RepairVerdict::Unconfirmed);
  }
}
