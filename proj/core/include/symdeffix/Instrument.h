//===-- Instrument.h - Malloc-size globals and sanitizer checks -*- C++ -*-===//

#ifndef SYMDEFFIX_INSTRUMENT_H
#define SYMDEFFIX_INSTRUMENT_H

#include "symdeffix/Ast.h"
#include "symdeffix/Constraint.h"

#include <string>
#include <vector>

namespace symdeffix {

enum class CheckKind { HeapBoundUpper, HeapBoundLower, DivByZero };

const char *toString(CheckKind k);

struct ErrorClasses {
  bool heapOverflow = true;
  bool divideByZero = true;

  static ErrorClasses all() { return {}; }
  static ErrorClasses none() { return {false, false}; }
  /// "heap-overflow", "divide-by-zero" or "all"; throws std::invalid_argument.
  static ErrorClasses parse(const std::string &s);
};

/// A check guarding one Index expression, one store statement or one
/// division. Checks live beside the AST; the engine evaluates them when it
/// reaches the guarded node.
struct SanitizerCheck {
  CheckKind kind = CheckKind::HeapBoundUpper;
  NodeId guardedNode = kNoNode; // Index expr, store stmt, or / % expr
  NodeId stmt = kNoNode;        // innermost enclosing statement
  int line = 0;
  std::string function;
  std::string buffer;           // heap checks
  NodeId operand = kNoNode;     // offset or divisor expression
  /// Over program variables: `offset < size(b)`, `offset >= 0` or
  /// `divisor != 0`, with `size(b)` an uninterpreted symbol.
  Constraint check;
};

/// Source file name without directory or extension, with every character
/// that cannot appear in an identifier mapped to '_'.
std::string fileStem(const std::string &path);

/// Introduces one size global per malloc call and assigns the malloc
/// argument to it immediately before the call. Idempotent.
std::vector<MallocSiteGlobal> insertMallocGlobals(Program &p);

/// Enumerates the checks for the enabled classes. Requires
/// insertMallocGlobals to have run.
std::vector<SanitizerCheck> insertSanitizerChecks(const Program &p,
                                                  ErrorClasses classes);

/// Writes the printed program to `<outDir>/<stem>/instrumented.c` and
/// returns that path.
std::string writeInstrumented(const Program &p, const std::string &outDir);

} // namespace symdeffix

#endif
