//===-- Repair.h - End-to-end repair driver ---------------------*- C++ -*-===//
//
// instrument -> symex -> fixloc -> wp -> synth -> re-verify, one crash report
// at a time, lowest crash line first.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_REPAIR_H
#define SYMDEFFIX_REPAIR_H

#include "symdeffix/Synth.h"

namespace symdeffix {

enum class RepairVerdict { Repaired, NoBugFound, BugNoPatch, Unconfirmed };

const char *toString(RepairVerdict v);
int exitCode(RepairVerdict v);

/// Exit code for unreadable input and parse/type errors.
constexpr int kInputErrorExit = 3;

struct RepairOptions {
  ExecBounds bounds;
  std::string errorClass = "all";
  RepairMode mode = RepairMode::AllPaths;
  SynthBudget budget;
  std::string outDir = "./tmp/";
  bool writeArtifacts = true;
  bool emitTimings = false; // timings make the report run-dependent
};

/// One fix location tried for one crash report.
struct CandidateRecord {
  size_t report = 0; // index into RepairReport::crashReports
  FixLocation loc;
  std::string status; // propagated, not-on-path, unsupported, already-safe, ...
  std::optional<PropagatedConstraint> constraint;
};

struct PatchRecord {
  size_t report = 0;
  Patch patch;
  std::string status; // applied, rejected-crash-persists, rejected-new-crash, ...
  std::string verification; // "all-paths" or "witness-replay"
};

struct CrossModeCheck {
  bool allPathsVerified = false;
  size_t remainingReports = 0;
  std::vector<int> remainingLines;
};

struct RepairReport {
  std::string inputPath;
  std::string instrumentedPath;
  RepairMode mode = RepairMode::AllPaths;
  RepairOptions options;
  std::vector<CrashReport> crashReports; // on the instrumented input
  size_t pathsExplored = 0;
  bool boundHit = false;
  std::vector<CandidateRecord> candidates;
  std::vector<PatchRecord> patches;
  RepairVerdict verdict = RepairVerdict::NoBugFound;
  std::string diff; // instrumented vs. repaired, only when Repaired
  std::string repairedSource;
  std::optional<CrossModeCheck> crossMode;
  std::vector<std::pair<std::string, double>> timings; // stage -> ms
  /// Printed instrumented program; crash reports refer to its node ids.
  std::string instrumentedSource;
};

/// Instrumented copy of `p` plus its checks.
struct Instrumented {
  Program program;
  std::vector<SanitizerCheck> checks;
};

Instrumented instrument(Program p, ErrorClasses classes);

/// Runs symex on an instrumented program.
ExecutionResult detect(const Instrumented &in, const ExecBounds &bounds);

/// Full pipeline on a parsed program. `inputPath` is only recorded.
RepairReport repairProgram(Program p, const std::string &inputPath,
                           const RepairOptions &opts);

/// Reads and parses `path` (throws SourceError or std::runtime_error), then
/// repairs it and, when enabled, writes the artifacts.
RepairReport runRepair(const std::string &path, const RepairOptions &opts);

/// Stable JSON text; timings are left out unless `withTimings`.
std::string emitReport(const RepairReport &r, bool withTimings = false);

/// Writes `<outDir>/<stem>.report.json` and, for Repaired, the patch file.
void writeArtifacts(const RepairReport &r);

} // namespace symdeffix

#endif
