//===-- Report.cpp - JSON report and artifact files -----------------------===//

#include "symdeffix/Printer.h"
#include "symdeffix/Repair.h"

#include "json.hpp"

#include <filesystem>
#include <fstream>

namespace symdeffix {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char *kSchemaVersion = "1.0";

Json traceJson(const std::vector<TraceEvent> &trace) {
  Json t = Json::array();
  for (const auto &e : trace)
    t.push_back(Json::array({e.kind, e.function}));
  return t;
}

Json crashJson(const CrashReport &c) {
  Json j;
  j["kind"] = toString(c.kind);
  j["cfc"] = c.cfc;
  j["trace"] = traceJson(c.trace);
  j["crash_line"] = c.crashLine;
  j["function"] = c.function;
  j["buffer"] = c.buffer;
  j["failing_paths"] = c.failingPaths.size();
  Json ids = Json::array();
  for (const auto &fp : c.failingPaths)
    ids.push_back(fp.pathId);
  j["path_ids"] = ids;
  j["unconfirmed"] = c.unconfirmed;
  Json w = Json::object();
  if (!c.failingPaths.empty())
    for (const auto &[sym, v] : c.failingPaths.front().witness)
      w[sym] = v;
  j["witness"] = w;
  return j;
}

Json candidateJson(const CandidateRecord &c) {
  Json j;
  j["report"] = c.report;
  j["rank"] = c.loc.rank;
  j["line"] = c.loc.line;
  j["kind"] = toString(c.loc.kind);
  j["function"] = c.loc.function;
  j["scope_vars"] = Json(std::vector<std::string>(c.loc.scopeVars.begin(),
                                                  c.loc.scopeVars.end()));
  j["status"] = c.status;
  if (c.constraint) {
    j["propagated_constraint"] = c.constraint->formula.str();
    Json per = Json::array();
    for (const auto &pp : c.constraint->perPath) {
      Json e;
      e["path_id"] = pp.pathId;
      e["taken"] = pp.taken;
      e["constraint"] = pp.formula.str();
      per.push_back(e);
    }
    j["per_path"] = per;
  } else {
    j["propagated_constraint"] = nullptr;
    j["per_path"] = Json::array();
  }
  return j;
}

Json patchJson(const PatchRecord &p) {
  Json j;
  j["report"] = p.report;
  j["location_rank"] = p.patch.loc.rank;
  j["line"] = p.patch.loc.line;
  j["location_kind"] = toString(p.patch.loc.kind);
  j["template"] = toString(p.patch.tmpl);
  j["expr"] = p.patch.expr ? printExpr(*p.patch.expr) : "";
  j["size"] = p.patch.size;
  j["status"] = p.status;
  j["verification"] = p.verification;
  j["verified"] = p.patch.verified;
  if (p.patch.verified)
    j["diff"] = p.patch.diff;
  else
    j["diff"] = nullptr;
  return j;
}

} // namespace

std::string emitReport(const RepairReport &r, bool withTimings) {
  const RepairOptions &o = r.options;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["input_path"] = r.inputPath;
  j["instrumented_path"] = r.instrumentedPath;
  j["mode"] = toString(r.mode);

  Json b;
  b["unroll_bound"] = o.bounds.unroll;
  b["max_paths"] = o.bounds.maxPaths;
  b["error_class"] = o.errorClass;
  b["solver_timeout_ms"] = o.bounds.solverTimeout.count();
  b["max_expr_size"] = o.budget.maxExprSize;
  b["max_patches"] = o.budget.maxPatches;
  j["bounds"] = b;

  j["verdict"] = toString(r.verdict);
  j["exit_code"] = exitCode(r.verdict);
  j["paths_explored"] = r.pathsExplored;
  j["bound_hit"] = r.boundHit;

  Json crashes = Json::array();
  for (const auto &c : r.crashReports)
    crashes.push_back(crashJson(c));
  j["crash_reports"] = crashes;

  Json cands = Json::array();
  for (const auto &c : r.candidates)
    cands.push_back(candidateJson(c));
  j["fix_candidates"] = cands;

  Json patches = Json::array();
  for (const auto &p : r.patches)
    patches.push_back(patchJson(p));
  j["patches"] = patches;

  if (r.verdict == RepairVerdict::Repaired)
    j["repaired_diff"] = r.diff;
  else
    j["repaired_diff"] = nullptr;

  if (r.crossMode) {
    Json cm;
    cm["all_paths_verified"] = r.crossMode->allPathsVerified;
    cm["remaining_crash_reports"] = r.crossMode->remainingReports;
    cm["remaining_crash_lines"] = r.crossMode->remainingLines;
    j["cross_mode_check"] = cm;
  } else {
    j["cross_mode_check"] = nullptr;
  }

  if (withTimings) {
    Json t = Json::object();
    for (const auto &[stage, ms] : r.timings)
      t[stage] = ms;
    j["timings_ms"] = t;
  }
  return j.dump(2) + "\n";
}

void writeArtifacts(const RepairReport &r) {
  namespace fs = std::filesystem;
  fs::path dir(r.options.outDir);
  fs::create_directories(dir);
  std::string stem = fileStem(r.inputPath);
  auto put = [](const fs::path &file, const std::string &text) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write '" + file.string() + "'");
    out << text;
  };
  put(dir / (stem + ".report.json"), emitReport(r, r.options.emitTimings));
  fs::path diff = dir / (stem + ".patch.diff");
  if (r.verdict == RepairVerdict::Repaired)
    put(diff, r.diff);
  else
    fs::remove(diff); // a stale diff from an earlier run must not survive
}

} // namespace symdeffix
