//===-- Dataflow.h - Reaching definitions and def-use chains ----*- C++ -*-===//

#ifndef SYMDEFFIX_DATAFLOW_H
#define SYMDEFFIX_DATAFLOW_H

#include "symdeffix/Cfg.h"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace symdeffix {

struct DefSite {
  NodeId node = kNoNode;
  std::string var;
};

struct UseSite {
  NodeId stmt = kNoNode; // statement, or If/While/For for its condition
  std::string var;
  bool operator<(const UseSite &o) const {
    return stmt != o.stmt ? stmt < o.stmt : var < o.var;
  }
};

/// Reaching definitions at block entry, given the ordered definitions each
/// block performs. A later definition of a variable in a block kills the
/// earlier ones.
std::vector<std::set<NodeId>>
reachingIn(const Cfg &cfg, const std::vector<std::vector<DefSite>> &blockDefs);

/// Variable written by a straight-line statement (stores write memory, not
/// a variable), or empty.
std::string definedVar(const Stmt &s);
/// Variables read by a straight-line statement, or by the condition of an
/// If/While/For.
std::set<std::string> usedVars(const Stmt &s);
std::set<std::string> usedVars(const Expr &e);

/// Reaching definitions for every (statement, variable) read in the
/// function. Parameters count as definitions at the entry, keyed by their
/// Param NodeId.
std::map<UseSite, std::set<NodeId>> defUseChains(const Cfg &cfg);

} // namespace symdeffix

#endif
