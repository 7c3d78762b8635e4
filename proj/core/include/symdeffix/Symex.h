//===-- Symex.h - Bounded all-path symbolic execution -----------*- C++ -*-===//
//
// Paths are explored depth first over per-function CFGs, true branch first.
// A path id is the string of branch decisions taken so far ('0' = true,
// '1' = false), so exploration order is the lexicographic order of ids.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_SYMEX_H
#define SYMDEFFIX_SYMEX_H

#include "symdeffix/Cfg.h"
#include "symdeffix/Instrument.h"
#include "symdeffix/Solver.h"

#include <chrono>
#include <optional>
#include <variant>

namespace symdeffix {

struct ExecBounds {
  unsigned unroll = 64;
  size_t maxPaths = 4096;
  std::chrono::milliseconds solverTimeout{2000};
  ErrorClasses classes;
  /// Restricts every nondet input to [first, second].
  std::optional<std::pair<int64_t, int64_t>> inputRange;
  /// Concrete values for inputs by symbol name (`nondet_0`, ...).
  std::map<std::string, int64_t> pinned;
};

struct TraceEvent {
  std::string kind; // "IN" or "OUT"
  std::string function;
  bool operator==(const TraceEvent &o) const {
    return kind == o.kind && function == o.function;
  }
};

struct AllocationRecord {
  int allocId = -1;
  Term size;
  NodeId site = kNoNode; // malloc call or array declaration
  int siteLine = 0;
  std::string sizeGlobal; // empty for fixed arrays
};

/// Buffer reference; allocId -1 is the null buffer (size 0).
struct BufRef {
  int allocId = -1;
};

using Value = std::variant<Term, BufRef>;

/// What the engine did, in order; the weakest-precondition walk replays it
/// backwards.
struct StepRecord {
  enum class Kind { Stmt, Branch, BoundExit, CallEnter, Return };
  Kind kind = Kind::Stmt;
  /// Stmt: the statement; Branch/BoundExit: the If/While/For; CallEnter and
  /// Return: the calling statement.
  NodeId node = kNoNode;
  int frame = 0;       // frame running `node` (the callee for CallEnter/Return)
  int callerFrame = 0; // CallEnter/Return
  std::string function;
  bool taken = false;   // Branch
  NodeId retStmt = kNoNode; // Return: the callee's return statement, if any
  size_t pcSize = 0;    // path-condition conjuncts before this step
  /// Stmt/Branch: int variables of the frame and globals before the step.
  std::map<std::string, Term> env;
};

struct FailingPath {
  std::string pathId;
  Constraint pathCondition;
  std::vector<Constraint> pcConjuncts; // pathCondition before conjoining
  /// Path condition, short-circuit context and the negated check.
  Constraint violation;
  Model witness;
  bool confirmed = true; // false when the solver answered Unknown
  std::vector<StepRecord> steps;
  std::vector<TraceEvent> trace;
  int crashFrame = 0;
  std::map<std::string, Term> crashEnv; // int variables at the check
  Term operand;           // offset or divisor value
  Term size;              // allocation size (heap checks)
  std::string sizeGlobal; // size global of the allocation, if malloc'd
};

struct CrashReport {
  CheckKind kind = CheckKind::HeapBoundUpper;
  NodeId crashNode = kNoNode; // guarded Index / store / division
  NodeId crashStmt = kNoNode;
  int crashLine = 0;
  std::string function;
  std::string buffer;
  NodeId operand = kNoNode;
  std::string cfc;
  std::vector<TraceEvent> trace;
  std::string instrumentedPath;
  std::vector<FailingPath> failingPaths;
  bool unconfirmed = false;
};

struct ExecutionResult {
  std::vector<CrashReport> reports;
  size_t pathsExplored = 0;
  bool boundHit = false;
  bool solverUnknown = false;
};

struct Frame {
  std::string function;
  int id = 0;
  const Cfg *cfg = nullptr;
  BlockId block = 0;
  size_t index = 0; // next statement within the block
  std::map<std::string, Value> env;
  std::map<NodeId, unsigned> unroll;
  NodeId callStmt = kNoNode; // statement in the caller awaiting the result
};

struct Allocation {
  AllocationRecord record;
  std::vector<std::pair<Term, Term>> writes; // (offset, value), oldest first
};

struct PathState {
  std::vector<Frame> frames;
  std::map<std::string, Term> globals;
  std::map<int, Allocation> heap;
  std::vector<Constraint> pc;
  std::vector<TraceEvent> trace;
  std::vector<StepRecord> steps;
  std::string pathId;
  int nondetCount = 0;
  int memCount = 0;
  int nextAlloc = 0;
  int nextFrame = 0;
  bool boundHit = false;
  bool finished = false;
  bool killed = false; // a concrete check failed; no continuation
  std::optional<Term> returnValue;

  Constraint pathCondition() const { return Constraint::conj(pc); }
  Frame &top() { return frames.back(); }
  const Frame &top() const { return frames.back(); }
  /// Int value of `name` in the current frame or the globals.
  const Term &intValue(const std::string &name) const;
};

class Executor {
public:
  /// `p` must be instrumented and outlive the executor.
  Executor(const Program &p, std::vector<SanitizerCheck> checks,
           ExecBounds bounds = {});

  ExecutionResult execute();

  /// State at the entry of main.
  PathState initialState() const;
  /// Runs the next statement or block terminator of `s` and returns its
  /// feasible successors (empty when the path ends).
  std::vector<PathState> step(PathState s);

  const ExecutionResult &partial() const { return result_; }
  const Cfg &cfgOf(const std::string &fn) const { return cfgs_.at(fn); }

private:
  Value evalValue(PathState &s, const Expr &e, const Constraint &guard);
  Term evalTerm(PathState &s, const Expr &e, const Constraint &guard);
  Constraint evalCond(PathState &s, const Expr &e, const Constraint &guard);
  Term readMemory(PathState &s, int alloc, const Term &offset);
  void runCheck(PathState &s, const SanitizerCheck &c, const Constraint &guard,
                const Term &operand, const Term &size,
                const std::string &sizeGlobal);
  bool feasible(const PathState &s, const Constraint &extra);
  void assign(PathState &s, const std::string &name, Value v);
  Value lookup(const PathState &s, const std::string &name) const;
  std::map<std::string, Term> snapshot(const PathState &s) const;
  Term freshInput(PathState &s);
  void enterBlock(PathState &s, BlockId to, bool back);
  void returnFrom(PathState &s, std::optional<Term> value, NodeId retStmt);
  void pushCall(PathState &s, const Expr &call, NodeId callStmt);
  int allocate(PathState &s, const Term &size, NodeId site, int line,
               const std::string &sizeGlobal);
  std::vector<PathState> branch(PathState s, const Stmt &br);
  std::vector<PathState> execStmt(PathState s, const Stmt &st);
  void finishReports();

  const Program &prog_;
  ProgramIndex index_;
  std::map<std::string, Cfg> cfgs_;
  std::map<NodeId, std::vector<SanitizerCheck>> checks_;
  ExecBounds bounds_;
  Solver solver_;
  ExecutionResult result_;
  std::map<std::pair<NodeId, CheckKind>, size_t> reportIndex_;
};

ExecutionResult execute(const Program &p,
                        const std::vector<SanitizerCheck> &checks,
                        const ExecBounds &bounds = {});

/// `access(v) < base(v)+size(v)`, `access(v) >= base(v)` or `<divisor> != 0`.
std::string renderCfc(const CrashReport &r, const Program &p);

} // namespace symdeffix

#endif
