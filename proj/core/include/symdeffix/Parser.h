//===-- Parser.h - Mini-C front end -----------------------------*- C++ -*-===//

#ifndef SYMDEFFIX_PARSER_H
#define SYMDEFFIX_PARSER_H

#include "symdeffix/Ast.h"

#include <string>

namespace symdeffix {

/// Parses and type-checks one translation unit. Throws SyntaxError for input
/// outside the grammar in docs/grammar.md and TypeError for ill-typed or
/// ill-scoped programs. NodeIds are assigned in source order, so identical
/// input yields identical ids.
Program parse(const std::string &source, const std::string &path = "input.c");

/// Reads `path` and parses it. Throws std::runtime_error if unreadable.
Program parseFile(const std::string &path);

/// Re-runs scope and type checking on an already-built program (used after
/// instrumentation and patching). Updates expression types in place.
void typeCheck(Program &p);

} // namespace symdeffix

#endif
