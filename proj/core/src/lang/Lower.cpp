//===-- Lower.cpp ---------------------------------------------------------===//

#include "symdeffix/Lower.h"

namespace symdeffix {

Term lowerTerm(const Expr &e, const LeafFn &leaf) {
  switch (e.kind) {
  case ExprKind::IntLit:
    return Term::constant(e.value);
  case ExprKind::Unary:
    if (e.unOp == UnOp::Neg)
      return -lowerTerm(*e.operands[0], leaf);
    break;
  case ExprKind::Binary: {
    if (isComparison(e.binOp) || isLogical(e.binOp))
      break;
    Term a = lowerTerm(e.lhs(), leaf);
    Term b = lowerTerm(e.rhs(), leaf);
    switch (e.binOp) {
    case BinOp::Add:
      return a + b;
    case BinOp::Sub:
      return a - b;
    case BinOp::Mul:
      return Term::mul(a, b);
    case BinOp::Div:
      return Term::div(a, b);
    case BinOp::Mod:
      return Term::mod(a, b);
    default:
      break;
    }
    break;
  }
  default:
    return leaf(e);
  }
  throw std::invalid_argument("boolean expression used as an integer at line " +
                              std::to_string(e.line));
}

Constraint lowerCond(const Expr &e, const LeafFn &leaf) {
  if (e.kind == ExprKind::Unary && e.unOp == UnOp::Not)
    return !lowerCond(*e.operands[0], leaf);
  if (e.kind == ExprKind::Binary) {
    if (e.binOp == BinOp::And)
      return lowerCond(e.lhs(), leaf) && lowerCond(e.rhs(), leaf);
    if (e.binOp == BinOp::Or)
      return lowerCond(e.lhs(), leaf) || lowerCond(e.rhs(), leaf);
    if (isComparison(e.binOp)) {
      Term a = lowerTerm(e.lhs(), leaf);
      Term b = lowerTerm(e.rhs(), leaf);
      switch (e.binOp) {
      case BinOp::Lt:
        return Constraint::lt(a, b);
      case BinOp::Le:
        return Constraint::le(a, b);
      case BinOp::Gt:
        return Constraint::gt(a, b);
      case BinOp::Ge:
        return Constraint::ge(a, b);
      case BinOp::Eq:
        return Constraint::eq(a, b);
      default:
        return Constraint::ne(a, b);
      }
    }
  }
  return Constraint::ne(lowerTerm(e, leaf), Term::constant(0));
}

int64_t arraySizeOf(const FunctionDef &fn, const std::string &name) {
  int64_t found = -1;
  std::function<void(const Stmt &)> walk = [&](const Stmt &s) {
    if (s.kind == StmtKind::Decl && s.declType == DeclType::Array &&
        s.name == name)
      found = s.arraySize;
    for (const Stmt *c : childStmts(s))
      walk(*c);
  };
  if (fn.body)
    walk(*fn.body);
  return found;
}

LeafFn programVarLeaf(const Program &, const FunctionDef &fn) {
  return [&fn](const Expr &e) -> Term {
    switch (e.kind) {
    case ExprKind::Var:
      return Term::symbol(e.name);
    case ExprKind::SizeOf:
      return Term::constant(arraySizeOf(fn, e.name));
    default:
      throw std::invalid_argument("expression at line " +
                                  std::to_string(e.line) +
                                  " has no pure term form");
    }
  };
}

} // namespace symdeffix
