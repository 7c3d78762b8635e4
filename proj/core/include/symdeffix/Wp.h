//===-- Wp.h - Weakest preconditions along failing paths --------*- C++ -*-===//
//
// The crash-free constraint is carried backward over the recorded steps of
// each failing path, from the crash to the last visit of a fix location in
// the crashing frame. Calls are walked through with frame-qualified names,
// and inputs or heap reads met on the way become fresh `havoc_k` symbols
// (read universally by the validity checks downstream).
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_WP_H
#define SYMDEFFIX_WP_H

#include "symdeffix/FixLoc.h"
#include "symdeffix/Lower.h"

namespace symdeffix {

enum class RepairMode { AllPaths, SingleTrace };

const char *toString(RepairMode m);

struct UnsupportedConstruct : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One execution of the fix location on a failing path: the path condition
/// when it was reached and the int variables of its frame at that point.
struct LocationVisit {
  std::string pathId;
  Constraint reach;
  std::map<std::string, Term> env;
  bool taken = false; // guards: branch direction
};

struct PathConstraint {
  std::string pathId;
  Constraint formula;
  /// Guards: direction of the last visit before the crash.
  bool taken = true;
};

struct PropagatedConstraint {
  FixLocation at;
  Constraint formula;
  std::vector<PathConstraint> perPath;
  RepairMode mode = RepairMode::AllPaths;
  std::vector<LocationVisit> visits;
};

/// Crash-free constraint at the crash point of `fp`, over the variables of
/// the crashing frame (unqualified) and globals. Buffer reads and inputs in
/// the offset become havoc symbols.
Constraint crashConstraint(const Program &p, const CrashReport &r,
                           const FailingPath &fp);

/// Standard single-step transformer for an int assignment or declaration;
/// identity for anything else. `leaf` lowers the right-hand side.
Constraint wpStmt(const Constraint &q, const Stmt &s, const LeafFn &leaf);
Constraint wpStmt(const Constraint &q, const Stmt &s);
/// Branch-literal pseudo step: (cond or !cond) -> q.
Constraint wpBranch(const Constraint &q, const Constraint &literal);

/// Propagates the report's constraint to `loc`. Returns nullopt when no
/// failing path passes the location. Throws UnsupportedConstruct when the
/// result contains non-linear terms.
std::optional<PropagatedConstraint>
propagate(const Program &p, const CrashReport &report, const FixLocation &loc,
          RepairMode mode);

} // namespace symdeffix

#endif
