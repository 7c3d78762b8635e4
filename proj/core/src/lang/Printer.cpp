//===-- Printer.cpp -------------------------------------------------------===//

#include "symdeffix/Printer.h"

#include <sstream>

namespace symdeffix {

namespace {

int precedence(const Expr &e) {
  if (e.kind == ExprKind::Unary)
    return 7;
  if (e.kind == ExprKind::IntLit && e.value < 0)
    return 7;
  if (e.kind != ExprKind::Binary)
    return 8;
  switch (e.binOp) {
  case BinOp::Or:
    return 1;
  case BinOp::And:
    return 2;
  case BinOp::Eq:
  case BinOp::Ne:
    return 3;
  case BinOp::Lt:
  case BinOp::Le:
  case BinOp::Gt:
  case BinOp::Ge:
    return 4;
  case BinOp::Add:
  case BinOp::Sub:
    return 5;
  default:
    return 6;
  }
}

void printExprTo(std::ostream &os, const Expr &e);

void printOperand(std::ostream &os, const Expr &e, bool paren) {
  if (paren)
    os << '(';
  printExprTo(os, e);
  if (paren)
    os << ')';
}

void printExprTo(std::ostream &os, const Expr &e) {
  switch (e.kind) {
  case ExprKind::IntLit:
    os << e.value;
    return;
  case ExprKind::Var:
    os << e.name;
    return;
  case ExprKind::SizeOf:
    os << "sizeof(" << e.name << ")";
    return;
  case ExprKind::Index:
    os << e.name << '[';
    printExprTo(os, *e.operands[0]);
    os << ']';
    return;
  case ExprKind::Call:
    os << e.name << '(';
    for (size_t i = 0; i < e.operands.size(); ++i) {
      if (i)
        os << ", ";
      printExprTo(os, *e.operands[i]);
    }
    os << ')';
    return;
  case ExprKind::Unary: {
    const Expr &o = *e.operands[0];
    os << spelling(e.unOp);
    // `- -x` and `-(5)` must not collapse into `--x` or a literal.
    bool paren = precedence(o) < 7 ||
                 (e.unOp == UnOp::Neg &&
                  (o.kind == ExprKind::IntLit ||
                   (o.kind == ExprKind::Unary && o.unOp == UnOp::Neg)));
    printOperand(os, o, paren);
    return;
  }
  case ExprKind::Binary: {
    int p = precedence(e);
    printOperand(os, e.lhs(), precedence(e.lhs()) < p);
    os << ' ' << spelling(e.binOp) << ' ';
    printOperand(os, e.rhs(), precedence(e.rhs()) <= p);
    return;
  }
  }
}

std::string pad(int indent) { return std::string(indent * 2, ' '); }

/// Statement text without indentation or trailing `;` (decls, assignments,
/// expression statements), used inline by for-headers.
std::string simpleText(const Stmt &s) {
  std::ostringstream os;
  switch (s.kind) {
  case StmtKind::Decl:
    if (s.declType == DeclType::Array) {
      os << s.typeSpelling << ' ' << s.name << '[' << s.arraySize << ']';
      break;
    }
    if (!s.typeSpelling.empty() && s.typeSpelling.back() == '*')
      os << s.typeSpelling << s.name;
    else
      os << (s.typeSpelling.empty() ? "int" : s.typeSpelling) << ' ' << s.name;
    if (s.value)
      os << " = " << printExpr(*s.value);
    break;
  case StmtKind::Assign:
    if (s.form == AssignForm::PostInc) {
      os << s.name << "++";
      break;
    }
    if (s.form == AssignForm::PostDec) {
      os << s.name << "--";
      break;
    }
    os << s.name;
    if (s.index)
      os << '[' << printExpr(*s.index) << ']';
    os << " = " << printExpr(*s.value);
    break;
  case StmtKind::ExprStmt:
    os << printExpr(*s.value);
    break;
  default:
    break;
  }
  return os.str();
}

void printStmtTo(std::ostream &os, const Stmt &s, int indent);

/// Body of a compound statement: a block opens on the header line.
void printBody(std::ostream &os, const Stmt &body, int indent) {
  if (body.kind == StmtKind::Block) {
    os << " {\n";
    for (const auto &c : body.stmts)
      printStmtTo(os, *c, indent + 1);
    os << pad(indent) << "}";
  } else {
    os << "\n";
    printStmtTo(os, body, indent + 1);
    os << pad(indent);
  }
}

void printStmtTo(std::ostream &os, const Stmt &s, int indent) {
  switch (s.kind) {
  case StmtKind::Block:
    os << pad(indent) << "{\n";
    for (const auto &c : s.stmts)
      printStmtTo(os, *c, indent + 1);
    os << pad(indent) << "}\n";
    return;
  case StmtKind::Decl:
  case StmtKind::Assign:
  case StmtKind::ExprStmt:
    os << pad(indent) << simpleText(s) << ";\n";
    return;
  case StmtKind::Return:
    os << pad(indent) << "return";
    if (s.value)
      os << ' ' << printExpr(*s.value);
    os << ";\n";
    return;
  case StmtKind::While:
    os << pad(indent) << "while (" << printExpr(*s.cond) << ")";
    printBody(os, *s.body, indent);
    os << (s.body->kind == StmtKind::Block ? "\n" : "");
    return;
  case StmtKind::For:
    os << pad(indent) << "for (" << (s.init ? simpleText(*s.init) : "")
       << "; " << printExpr(*s.cond) << ";"
       << (s.step ? " " + simpleText(*s.step) : "") << ")";
    printBody(os, *s.body, indent);
    os << (s.body->kind == StmtKind::Block ? "\n" : "");
    return;
  case StmtKind::If: {
    os << pad(indent) << "if (" << printExpr(*s.cond) << ")";
    const Stmt *cur = &s;
    for (;;) {
      printBody(os, *cur->thenBranch, indent);
      bool block = cur->thenBranch->kind == StmtKind::Block;
      if (!cur->elseBranch) {
        os << (block ? "\n" : "");
        return;
      }
      os << (block ? " else" : "else");
      const Stmt &e = *cur->elseBranch;
      if (e.kind == StmtKind::If) {
        os << " if (" << printExpr(*e.cond) << ")";
        cur = &e;
        continue;
      }
      printBody(os, e, indent);
      os << (e.kind == StmtKind::Block ? "\n" : "");
      return;
    }
  }
  }
}

} // namespace

std::string printExpr(const Expr &e) {
  std::ostringstream os;
  printExprTo(os, e);
  return os.str();
}

std::string printStmt(const Stmt &s, int indent) {
  std::ostringstream os;
  printStmtTo(os, s, indent);
  return os.str();
}

std::string printProgram(const Program &p) {
  std::ostringstream os;
  for (const auto &g : p.globals) {
    os << "int " << g.name;
    if (g.init != 0)
      os << " = " << g.init;
    os << ";\n";
  }
  for (size_t i = 0; i < p.functions.size(); ++i) {
    const FunctionDef &f = p.functions[i];
    if (i || !p.globals.empty())
      os << "\n";
    os << toString(f.returnType) << ' ' << f.name << '(';
    for (size_t j = 0; j < f.params.size(); ++j) {
      const Param &pr = f.params[j];
      if (j)
        os << ", ";
      std::string ts = pr.typeSpelling.empty() ? toString(pr.type)
                                               : pr.typeSpelling;
      os << ts << (ts.back() == '*' ? "" : " ") << pr.name;
    }
    os << ") {\n";
    for (const auto &s : f.body->stmts)
      printStmtTo(os, *s, 1);
    os << "}\n";
  }
  return os.str();
}

} // namespace symdeffix
