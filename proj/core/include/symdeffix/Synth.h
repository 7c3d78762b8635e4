//===-- Synth.h - Enumerative patch synthesis -------------------*- C++ -*-===//
//
// Expressions are enumerated bottom-up by node count from
//   Cond   -> ArithE cmp ArithE | Cond && Cond | Cond || Cond | !Cond
//   ArithE -> var | const | ArithE + ArithE | ArithE - ArithE | sizeof(a)
// with cmp in {<, <=, ==, !=}. Candidates with the same linear normal form
// are kept once. A candidate is accepted when the patched location makes the
// propagated constraint valid and the patched guard can still be true at
// some recorded visit of the location.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_SYNTH_H
#define SYMDEFFIX_SYNTH_H

#include "symdeffix/Wp.h"

#include <chrono>

namespace symdeffix {

enum class PatchTemplate { GuardStrengthen, GuardInsert, RhsReplace, GuardReplace };

const char *toString(PatchTemplate t);

struct SynthBudget {
  unsigned maxExprSize = 9;
  size_t maxPatches = 5;
  std::chrono::milliseconds timeout{8000};
  std::chrono::milliseconds solverTimeout{2000};
};

struct Patch {
  FixLocation loc;
  PatchTemplate tmpl = PatchTemplate::GuardStrengthen;
  std::shared_ptr<const Expr> expr; // node ids are assigned on application
  unsigned size = 0;
  std::string diff;
  bool verified = false;
};

enum class SynthVerdict { Found, AlreadySafe };

struct SynthResult {
  SynthVerdict verdict = SynthVerdict::Found;
  std::vector<Patch> patches; // best first
  size_t candidates = 0;      // expressions checked
};

struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NodeNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integer literals of the user-written statements, plus 0 and 1, ascending.
std::vector<int64_t> harvestConstants(const Program &p);

/// Throws BudgetExhausted when no candidate is accepted within the budget.
SynthResult synthesize(const Program &p, const PropagatedConstraint &pc,
                       const SynthBudget &budget = {});

/// Single-node edit of a copy of `p`; fills `patch.diff` from the pretty
/// prints. Throws NodeNotFound.
Program applyPatch(const Program &p, Patch &patch);

/// Line-based unified diff with `context` lines around each change; empty
/// when the texts are equal.
std::string unifiedDiff(const std::string &before, const std::string &after,
                        const std::string &path, int context = 3);

} // namespace symdeffix

#endif
