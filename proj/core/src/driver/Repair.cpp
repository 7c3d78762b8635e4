//===-- Repair.cpp - Pipeline orchestration and re-verification -----------===//

#include "symdeffix/Repair.h"
#include "symdeffix/Parser.h"
#include "symdeffix/Printer.h"

#include <algorithm>
#include <filesystem>
#include <set>

namespace symdeffix {

const char *toString(RepairVerdict v) {
  switch (v) {
  case RepairVerdict::Repaired:
    return "Repaired";
  case RepairVerdict::NoBugFound:
    return "NoBugFound";
  case RepairVerdict::BugNoPatch:
    return "BugNoPatch";
  case RepairVerdict::Unconfirmed:
    return "Unconfirmed";
  }
  return "?";
}

int exitCode(RepairVerdict v) {
  switch (v) {
  case RepairVerdict::Repaired:
    return 0;
  case RepairVerdict::NoBugFound:
    return 1;
  case RepairVerdict::BugNoPatch:
    return 2;
  case RepairVerdict::Unconfirmed:
    return 4;
  }
  return 4;
}

Instrumented instrument(Program p, ErrorClasses classes) {
  insertMallocGlobals(p);
  Instrumented in;
  in.checks = insertSanitizerChecks(p, classes);
  in.program = std::move(p);
  return in;
}

ExecutionResult detect(const Instrumented &in, const ExecBounds &bounds) {
  return execute(in.program, in.checks, bounds);
}

namespace {

using Clock = std::chrono::steady_clock;
using ReportKey = std::pair<NodeId, CheckKind>;

ReportKey keyOf(const CrashReport &r) { return {r.crashNode, r.kind}; }

std::set<ReportKey> keysOf(const ExecutionResult &res) {
  std::set<ReportKey> out;
  for (const auto &r : res.reports)
    out.insert(keyOf(r));
  return out;
}

bool truncated(const ExecutionResult &res, const ExecBounds &b) {
  return res.solverUnknown || res.pathsExplored >= b.maxPaths;
}

class Timings {
public:
  void add(const std::string &stage, Clock::duration d) {
    double ms = std::chrono::duration<double, std::milli>(d).count();
    for (auto &[s, v] : stages_)
      if (s == stage) {
        v += ms;
        return;
      }
    stages_.emplace_back(stage, ms);
  }
  template <typename F> auto time(const std::string &stage, F &&fn) {
    auto t0 = Clock::now();
    struct Done {
      Timings *self;
      std::string stage;
      Clock::time_point t0;
      ~Done() { self->add(stage, Clock::now() - t0); }
    } done{this, stage, t0};
    return fn();
  }
  std::vector<std::pair<std::string, double>> take() { return stages_; }

private:
  std::vector<std::pair<std::string, double>> stages_;
};

struct Accepted {
  Program program;
  ExecutionResult result;
};

class Driver {
public:
  Driver(RepairReport &r, const RepairOptions &o) : r_(r), opts_(o) {}

  void run(Program input) {
    for (const char *s : {"instrument", "symex", "fixloc", "wp", "synth",
                          "reverify"})
      timings_.add(s, Clock::duration::zero());
    Instrumented base = timings_.time(
        "instrument", [&] { return instrument(std::move(input), opts_.bounds.classes); });
    r_.instrumentedSource = printProgram(base.program);
    std::string stem = fileStem(base.program.sourcePath);
    if (opts_.writeArtifacts)
      r_.instrumentedPath = writeInstrumented(base.program, opts_.outDir);
    else
      r_.instrumentedPath =
          (std::filesystem::path(opts_.outDir) / stem / "instrumented.c").string();

    ExecutionResult first =
        timings_.time("symex", [&] { return detect(base, opts_.bounds); });
    for (auto &cr : first.reports)
      cr.instrumentedPath = r_.instrumentedPath;
    r_.crashReports = first.reports;
    r_.pathsExplored = first.pathsExplored;
    r_.boundHit = first.boundHit;

    if (first.reports.empty()) {
      r_.verdict = RepairVerdict::NoBugFound;
      finish();
      return;
    }
    if (std::all_of(first.reports.begin(), first.reports.end(),
                    [](const CrashReport &c) { return c.unconfirmed; })) {
      r_.verdict = RepairVerdict::Unconfirmed;
      finish();
      return;
    }

    if (opts_.mode == RepairMode::SingleTrace)
      singleTrace(base, first);
    else
      allPaths(base, first);
    finish();
  }

private:
  size_t reportIndex(const CrashReport &c) const {
    for (size_t i = 0; i < r_.crashReports.size(); ++i)
      if (keyOf(r_.crashReports[i]) == keyOf(c))
        return i;
    return r_.crashReports.size();
  }

  ExecBounds replayBounds(const FailingPath &fp) const {
    ExecBounds b = opts_.bounds;
    for (const auto &[sym, v] : fp.witness)
      if (sym.rfind("nondet_", 0) == 0)
        b.pinned[sym] = v;
    // Inputs the violation does not mention are free in the witness; any
    // value is a valid replay, so take 0.
    for (int k = 0; k < 256; ++k)
      b.pinned.emplace("nondet_" + std::to_string(k), 0);
    return b;
  }

  /// Tries the ranked locations for `target` until one patch passes the
  /// mode's verification.
  std::optional<Accepted> repairOne(const Program &current,
                                    const ExecutionResult &before,
                                    const CrashReport &target) {
    size_t idx = reportIndex(target);
    CrashReport t = target;
    if (opts_.mode == RepairMode::SingleTrace)
      t.failingPaths.resize(1);

    std::vector<FixLocation> locs;
    try {
      locs = timings_.time("fixloc", [&] {
        Cfg cfg = buildCfg(*current.findFunction(t.function));
        return findFixLocations(current, cfg, t);
      });
    } catch (const EmptyCandidates &) {
      return std::nullopt;
    }

    std::set<ReportKey> allowed = keysOf(before);
    allowed.erase(keyOf(t));

    for (const auto &loc : locs) {
      CandidateRecord c;
      c.report = idx;
      c.loc = loc;
      std::optional<PropagatedConstraint> pc;
      try {
        pc = timings_.time("wp",
                           [&] { return propagate(current, t, loc, opts_.mode); });
      } catch (const UnsupportedConstruct &) {
        c.status = "unsupported";
        r_.candidates.push_back(std::move(c));
        continue;
      }
      if (!pc) {
        c.status = "not-on-path";
        r_.candidates.push_back(std::move(c));
        continue;
      }
      c.constraint = pc;
      SynthResult sr;
      try {
        sr = timings_.time("synth",
                           [&] { return synthesize(current, *pc, opts_.budget); });
      } catch (const BudgetExhausted &) {
        c.status = "no-candidate";
        r_.candidates.push_back(std::move(c));
        continue;
      }
      if (sr.verdict == SynthVerdict::AlreadySafe) {
        c.status = "already-safe";
        r_.candidates.push_back(std::move(c));
        continue;
      }
      c.status = "synthesized";
      r_.candidates.push_back(std::move(c));

      for (Patch patch : sr.patches) {
        PatchRecord pr;
        pr.report = idx;
        Program next = applyPatch(current, patch);
        typeCheck(next);
        std::vector<SanitizerCheck> checks =
            insertSanitizerChecks(next, opts_.bounds.classes);
        bool single = opts_.mode == RepairMode::SingleTrace;
        ExecBounds vb = single ? replayBounds(t.failingPaths.front()) : opts_.bounds;
        ExecutionResult res = timings_.time(
            "reverify", [&] { return execute(next, checks, vb); });
        pr.verification = single ? "witness-replay" : "all-paths";
        std::set<ReportKey> after = keysOf(res);
        if (truncated(res, vb)) {
          pr.status = "rejected-unconfirmed";
        } else if (after.count(keyOf(t))) {
          pr.status = "rejected-crash-persists";
        } else if (single ? !after.empty()
                          : !std::includes(allowed.begin(), allowed.end(),
                                           after.begin(), after.end())) {
          pr.status = "rejected-new-crash";
        } else {
          pr.status = "applied";
        }
        pr.patch = std::move(patch);
        bool ok = pr.status == "applied";
        r_.patches.push_back(std::move(pr));
        if (ok)
          return Accepted{std::move(next), std::move(res)};
      }
    }
    return std::nullopt;
  }

  void allPaths(const Instrumented &base, const ExecutionResult &first) {
    Program current = base.program;
    ExecutionResult cur = first;
    std::vector<size_t> applied;
    // Every accepted patch removes one report and adds none.
    size_t rounds = first.reports.size() + 1;
    while (!cur.reports.empty() && rounds-- > 0) {
      auto target = std::find_if(cur.reports.begin(), cur.reports.end(),
                                 [](const CrashReport &c) { return !c.unconfirmed; });
      if (target == cur.reports.end())
        break;
      std::optional<Accepted> acc = repairOne(current, cur, *target);
      if (!acc)
        break;
      applied.push_back(r_.patches.size() - 1);
      current = std::move(acc->program);
      cur = std::move(acc->result);
    }

    if (!cur.reports.empty()) {
      bool onlyUnconfirmed =
          std::all_of(cur.reports.begin(), cur.reports.end(),
                      [](const CrashReport &c) { return c.unconfirmed; });
      r_.verdict = onlyUnconfirmed ? RepairVerdict::Unconfirmed
                                   : RepairVerdict::BugNoPatch;
      for (size_t i : applied)
        r_.patches[i].status = "applied-partial";
      return;
    }
    for (size_t i : applied)
      r_.patches[i].patch.verified = true;
    r_.verdict = RepairVerdict::Repaired;
    setRepaired(base.program, current);
  }

  void singleTrace(const Instrumented &base, const ExecutionResult &first) {
    auto target = std::find_if(first.reports.begin(), first.reports.end(),
                               [](const CrashReport &c) { return !c.unconfirmed; });
    std::optional<Accepted> acc = repairOne(base.program, first, *target);
    if (!acc) {
      r_.verdict = RepairVerdict::BugNoPatch;
      return;
    }
    r_.patches.back().patch.verified = true;
    r_.verdict = RepairVerdict::Repaired;

    std::vector<SanitizerCheck> checks =
        insertSanitizerChecks(acc->program, opts_.bounds.classes);
    ExecutionResult all = timings_.time(
        "reverify", [&] { return execute(acc->program, checks, opts_.bounds); });
    CrossModeCheck cm;
    cm.allPathsVerified = all.reports.empty() && !truncated(all, opts_.bounds);
    cm.remainingReports = all.reports.size();
    for (const auto &c : all.reports)
      cm.remainingLines.push_back(c.crashLine);
    r_.crossMode = cm;
    setRepaired(base.program, acc->program);
  }

  void setRepaired(const Program &before, const Program &after) {
    r_.repairedSource = printProgram(after);
    r_.diff = unifiedDiff(
        printProgram(before), r_.repairedSource,
        std::filesystem::path(before.sourcePath).filename().string());
  }

  void finish() { r_.timings = timings_.take(); }

  RepairReport &r_;
  const RepairOptions &opts_;
  Timings timings_;
};

} // namespace

RepairReport repairProgram(Program p, const std::string &inputPath,
                           const RepairOptions &opts) {
  RepairReport r;
  r.inputPath = inputPath;
  r.mode = opts.mode;
  r.options = opts;
  Driver(r, opts).run(std::move(p));
  return r;
}

RepairReport runRepair(const std::string &path, const RepairOptions &opts) {
  Program p = parseFile(path);
  RepairReport r = repairProgram(std::move(p), path, opts);
  if (opts.writeArtifacts)
    writeArtifacts(r);
  return r;
}

} // namespace symdeffix
