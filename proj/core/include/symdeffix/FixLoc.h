//===-- FixLoc.h - Candidate fix locations ----------------------*- C++ -*-===//
//
// Candidates come from control dependence (guards the crash depends on) and
// transitive def-use chains into the variables of the crash-free
// constraint. Only program points in the crashing function that dominate
// the crash are kept.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_FIXLOC_H
#define SYMDEFFIX_FIXLOC_H

#include "symdeffix/Symex.h"

#include <set>
#include <stdexcept>

namespace symdeffix {

enum class FixKind { LoopGuard, BranchGuard, AssignRhs, InsertBefore };

const char *toString(FixKind k);

struct FixLocation {
  NodeId node = kNoNode; // If/While/For, Decl/Assign, or the crash statement
  int line = 0;
  FixKind kind = FixKind::InsertBefore;
  std::string function;
  /// Int variables visible at the location, globals included.
  std::set<std::string> scopeVars;
  /// Fixed-size arrays visible at the location (for sizeof terminals).
  std::set<std::string> scopeArrays;
  int rank = 0;
  unsigned distance = 0; // CFG edges from the location to the crash
};

struct EmptyCandidates : std::runtime_error {
  EmptyCandidates() : std::runtime_error("bug found, no fix location") {}
};

/// Variables and arrays in scope immediately before statement `stmt`. For
/// loops the init declaration counts as visible at the guard.
void scopeAt(const Program &p, NodeId stmt, std::set<std::string> &vars,
             std::set<std::string> &arrays);

/// Guard blocks on which `block` is control dependent, transitively.
std::set<BlockId> controlDependences(const Cfg &cfg, BlockId block);

/// Ranked candidates (closest to the crash first, InsertBefore last),
/// capped at `cap`. Throws EmptyCandidates.
std::vector<FixLocation> findFixLocations(const Program &p, const Cfg &cfg,
                                          const CrashReport &report,
                                          size_t cap = 10);

} // namespace symdeffix

#endif
