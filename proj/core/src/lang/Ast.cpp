//===-- Ast.cpp -----------------------------------------------------------===//

#include "symdeffix/Ast.h"

#include <functional>

namespace symdeffix {

const char *toString(Type t) {
  switch (t) {
  case Type::Int:
    return "int";
  case Type::Bool:
    return "bool";
  case Type::Buf:
    return "buf";
  case Type::Void:
    return "void";
  }
  return "?";
}

SourceError::SourceError(const std::string &kind, int line, int column,
                         const std::string &msg)
    : std::runtime_error(kind + " at line " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + msg),
      line(line), column(column), message(msg) {}

const char *spelling(BinOp op) {
  switch (op) {
  case BinOp::Add:
    return "+";
  case BinOp::Sub:
    return "-";
  case BinOp::Mul:
    return "*";
  case BinOp::Div:
    return "/";
  case BinOp::Mod:
    return "%";
  case BinOp::Lt:
    return "<";
  case BinOp::Le:
    return "<=";
  case BinOp::Gt:
    return ">";
  case BinOp::Ge:
    return ">=";
  case BinOp::Eq:
    return "==";
  case BinOp::Ne:
    return "!=";
  case BinOp::And:
    return "&&";
  case BinOp::Or:
    return "||";
  }
  return "?";
}

const char *spelling(UnOp op) { return op == UnOp::Neg ? "-" : "!"; }

bool isComparison(BinOp op) {
  return op == BinOp::Lt || op == BinOp::Le || op == BinOp::Gt ||
         op == BinOp::Ge || op == BinOp::Eq || op == BinOp::Ne;
}

bool isLogical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->id = id;
  e->line = line;
  e->type = type;
  e->value = value;
  e->name = name;
  e->binOp = binOp;
  e->unOp = unOp;
  for (const auto &o : operands)
    e->operands.push_back(o->clone());
  return e;
}

namespace {
template <typename T> std::unique_ptr<T> cloneOpt(const std::unique_ptr<T> &p) {
  return p ? p->clone() : nullptr;
}
} // namespace

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->id = id;
  s->line = line;
  s->synthetic = synthetic;
  s->declType = declType;
  s->typeSpelling = typeSpelling;
  s->arraySize = arraySize;
  s->name = name;
  s->index = cloneOpt(index);
  s->form = form;
  s->value = cloneOpt(value);
  s->cond = cloneOpt(cond);
  s->thenBranch = cloneOpt(thenBranch);
  s->elseBranch = cloneOpt(elseBranch);
  s->init = cloneOpt(init);
  s->step = cloneOpt(step);
  s->body = cloneOpt(body);
  for (const auto &c : stmts)
    s->stmts.push_back(c->clone());
  return s;
}

FunctionDef::FunctionDef(const FunctionDef &o)
    : id(o.id), line(o.line), returnType(o.returnType), name(o.name),
      params(o.params), body(o.body ? o.body->clone() : nullptr) {}

FunctionDef &FunctionDef::operator=(const FunctionDef &o) {
  if (this != &o) {
    FunctionDef tmp(o);
    *this = std::move(tmp);
  }
  return *this;
}

const FunctionDef *Program::findFunction(const std::string &name) const {
  for (const auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

FunctionDef *Program::findFunction(const std::string &name) {
  for (auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const GlobalDecl *Program::findGlobal(const std::string &name) const {
  for (const auto &g : globals)
    if (g.name == name)
      return &g;
  return nullptr;
}

const MallocSiteGlobal *Program::mallocGlobalFor(NodeId call) const {
  for (const auto &m : mallocGlobals)
    if (m.mallocCall == call)
      return &m;
  return nullptr;
}

std::vector<const Expr *> ownExprs(const Stmt &s) {
  std::vector<const Expr *> out;
  for (const ExprPtr *p : {&s.index, &s.value, &s.cond})
    if (*p)
      out.push_back(p->get());
  return out;
}

std::vector<const Stmt *> childStmts(const Stmt &s) {
  std::vector<const Stmt *> out;
  for (const StmtPtr *p :
       {&s.init, &s.thenBranch, &s.elseBranch, &s.body, &s.step})
    if (*p)
      out.push_back(p->get());
  for (const auto &c : s.stmts)
    out.push_back(c.get());
  return out;
}

ProgramIndex::ProgramIndex(const Program &p) {
  for (const auto &fn : p.functions) {
    fn_[fn.id] = &fn;
    ids_.push_back(fn.id);
    for (const auto &param : fn.params) {
      ids_.push_back(param.id);
      fn_[param.id] = &fn;
    }
    if (fn.body)
      indexStmt(*fn.body, nullptr, fn);
  }
  for (const auto &g : p.globals)
    ids_.push_back(g.id);
}

void ProgramIndex::indexStmt(const Stmt &s, const Stmt *parent,
                             const FunctionDef &fn) {
  stmts_[s.id] = &s;
  owner_[s.id] = &s;
  parent_[s.id] = parent;
  fn_[s.id] = &fn;
  ids_.push_back(s.id);
  for (const Expr *e : ownExprs(s))
    indexExpr(*e, s, fn);
  for (const Stmt *c : childStmts(s))
    indexStmt(*c, &s, fn);
}

void ProgramIndex::indexExpr(const Expr &e, const Stmt &owner,
                             const FunctionDef &fn) {
  forEachExpr(e, [&](const Expr &x) {
    exprs_[x.id] = &x;
    owner_[x.id] = &owner;
    fn_[x.id] = &fn;
    ids_.push_back(x.id);
  });
}

const Stmt *ProgramIndex::stmt(NodeId id) const {
  auto it = stmts_.find(id);
  return it == stmts_.end() ? nullptr : it->second;
}

const Expr *ProgramIndex::expr(NodeId id) const {
  auto it = exprs_.find(id);
  return it == exprs_.end() ? nullptr : it->second;
}

const Stmt *ProgramIndex::enclosingStmt(NodeId id) const {
  auto it = owner_.find(id);
  return it == owner_.end() ? nullptr : it->second;
}

const Stmt *ProgramIndex::parentStmt(NodeId stmtId) const {
  auto it = parent_.find(stmtId);
  return it == parent_.end() ? nullptr : it->second;
}

const FunctionDef *ProgramIndex::functionOf(NodeId id) const {
  auto it = fn_.find(id);
  return it == fn_.end() ? nullptr : it->second;
}

namespace {

Stmt *findStmtIn(Stmt &s, NodeId id) {
  if (s.id == id)
    return &s;
  for (StmtPtr *p : {&s.init, &s.thenBranch, &s.elseBranch, &s.body, &s.step})
    if (*p)
      if (Stmt *r = findStmtIn(**p, id))
        return r;
  for (auto &c : s.stmts)
    if (Stmt *r = findStmtIn(*c, id))
      return r;
  return nullptr;
}

Expr *findExprIn(Expr &e, NodeId id) {
  if (e.id == id)
    return &e;
  for (auto &o : e.operands)
    if (Expr *r = findExprIn(*o, id))
      return r;
  return nullptr;
}

Expr *findExprInStmt(Stmt &s, NodeId id) {
  for (ExprPtr *p : {&s.index, &s.value, &s.cond})
    if (*p)
      if (Expr *r = findExprIn(**p, id))
        return r;
  for (StmtPtr *p : {&s.init, &s.thenBranch, &s.elseBranch, &s.body, &s.step})
    if (*p)
      if (Expr *r = findExprInStmt(**p, id))
        return r;
  for (auto &c : s.stmts)
    if (Expr *r = findExprInStmt(*c, id))
      return r;
  return nullptr;
}

} // namespace

Stmt *findStmt(Program &p, NodeId id) {
  for (auto &fn : p.functions)
    if (fn.body)
      if (Stmt *s = findStmtIn(*fn.body, id))
        return s;
  return nullptr;
}

Expr *findExpr(Program &p, NodeId id) {
  for (auto &fn : p.functions)
    if (fn.body)
      if (Expr *e = findExprInStmt(*fn.body, id))
        return e;
  return nullptr;
}

bool structurallyEqual(const Expr &a, const Expr &b) {
  if (a.kind != b.kind || a.type != b.type || a.value != b.value ||
      a.name != b.name || a.operands.size() != b.operands.size())
    return false;
  if (a.kind == ExprKind::Binary && a.binOp != b.binOp)
    return false;
  if (a.kind == ExprKind::Unary && a.unOp != b.unOp)
    return false;
  for (size_t i = 0; i < a.operands.size(); ++i)
    if (!structurallyEqual(*a.operands[i], *b.operands[i]))
      return false;
  return true;
}

namespace {
template <typename T>
bool optEqual(const std::unique_ptr<T> &a, const std::unique_ptr<T> &b) {
  if (!a || !b)
    return !a && !b;
  return structurallyEqual(*a, *b);
}
} // namespace

bool structurallyEqual(const Stmt &a, const Stmt &b) {
  if (a.kind != b.kind || a.declType != b.declType ||
      a.arraySize != b.arraySize || a.name != b.name || a.form != b.form ||
      a.stmts.size() != b.stmts.size())
    return false;
  if (!optEqual(a.index, b.index) || !optEqual(a.value, b.value) ||
      !optEqual(a.cond, b.cond) || !optEqual(a.thenBranch, b.thenBranch) ||
      !optEqual(a.elseBranch, b.elseBranch) || !optEqual(a.init, b.init) ||
      !optEqual(a.step, b.step) || !optEqual(a.body, b.body))
    return false;
  for (size_t i = 0; i < a.stmts.size(); ++i)
    if (!structurallyEqual(*a.stmts[i], *b.stmts[i]))
      return false;
  return true;
}

bool structurallyEqual(const Program &a, const Program &b) {
  if (a.globals.size() != b.globals.size() ||
      a.functions.size() != b.functions.size())
    return false;
  for (size_t i = 0; i < a.globals.size(); ++i)
    if (a.globals[i].name != b.globals[i].name ||
        a.globals[i].init != b.globals[i].init)
      return false;
  for (size_t i = 0; i < a.functions.size(); ++i) {
    const auto &fa = a.functions[i], &fb = b.functions[i];
    if (fa.name != fb.name || fa.returnType != fb.returnType ||
        fa.params.size() != fb.params.size())
      return false;
    for (size_t j = 0; j < fa.params.size(); ++j)
      if (fa.params[j].name != fb.params[j].name ||
          fa.params[j].type != fb.params[j].type)
        return false;
    if (!structurallyEqual(*fa.body, *fb.body))
      return false;
  }
  return true;
}

} // namespace symdeffix
