//===-- Printer.h - Mini-C pretty printer -----------------------*- C++ -*-===//

#ifndef SYMDEFFIX_PRINTER_H
#define SYMDEFFIX_PRINTER_H

#include "symdeffix/Ast.h"

#include <string>

namespace symdeffix {

/// Prints with the fewest parentheses that reparse to the same tree.
std::string printExpr(const Expr &e);
/// One statement at the given indent (2 spaces per level), newline-terminated.
std::string printStmt(const Stmt &s, int indent = 0);
/// Whole translation unit. Output reparses to a structurally equal program.
std::string printProgram(const Program &p);

} // namespace symdeffix

#endif
