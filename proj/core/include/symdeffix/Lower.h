//===-- Lower.h - Mini-C expressions to terms and constraints ---*- C++ -*-===//

#ifndef SYMDEFFIX_LOWER_H
#define SYMDEFFIX_LOWER_H

#include "symdeffix/Ast.h"
#include "symdeffix/Constraint.h"

#include <functional>

namespace symdeffix {

/// Supplies the term for a leaf expression (Var, Index, Call, SizeOf).
using LeafFn = std::function<Term(const Expr &)>;

/// Arithmetic lowering with C truncating division. Boolean operands are not
/// accepted (the type checker keeps them out of arithmetic).
Term lowerTerm(const Expr &e, const LeafFn &leaf);

/// Boolean lowering; an int-typed expression means `e != 0`.
Constraint lowerCond(const Expr &e, const LeafFn &leaf);

/// Leaf function mapping variables to same-named symbols and sizeof to the
/// array size; throws std::invalid_argument on calls and buffer reads.
LeafFn programVarLeaf(const Program &p, const FunctionDef &fn);

/// Declared size of array `name` in `fn`, or -1.
int64_t arraySizeOf(const FunctionDef &fn, const std::string &name);

} // namespace symdeffix

#endif
