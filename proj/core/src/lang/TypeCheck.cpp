//===-- TypeCheck.cpp - Scope and type rules for Mini-C -------------------===//

#include "symdeffix/Parser.h"

#include <functional>
#include <set>

namespace symdeffix {

namespace {

enum class VarKind { Int, Array, BufRef };

struct VarInfo {
  VarKind kind;
};

bool isBuiltin(const std::string &n) { return n == "malloc" || n == "nondet_int"; }

class Checker {
public:
  explicit Checker(Program &p) : prog_(p) {}

  void run() {
    std::set<std::string> seen;
    for (const auto &g : prog_.globals) {
      if (isBuiltin(g.name))
        throw TypeError(g.line, 1, "'" + g.name + "' is reserved");
      if (!seen.insert(g.name).second)
        throw TypeError(g.line, 1, "redefinition of '" + g.name + "'");
    }
    for (const auto &f : prog_.functions) {
      if (isBuiltin(f.name))
        throw TypeError(f.line, 1, "'" + f.name + "' is reserved");
      if (!seen.insert(f.name).second)
        throw TypeError(f.line, 1, "redefinition of '" + f.name + "'");
    }
    const FunctionDef *mainFn = prog_.findFunction("main");
    if (!mainFn)
      throw TypeError(1, 1, "program has no 'main' function");
    if (!mainFn->params.empty())
      throw TypeError(mainFn->line, 1, "'main' must take no parameters");
    if (mainFn->returnType != Type::Int)
      throw TypeError(mainFn->line, 1, "'main' must return int");

    for (auto &f : prog_.functions)
      checkFunction(f);
    checkNoRecursion();
  }

private:
  using Scope = std::map<std::string, VarInfo>;

  const VarInfo *lookup(const std::string &n) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end())
        return &f->second;
    }
    return nullptr;
  }

  void declare(const std::string &n, VarKind k, int line) {
    if (isBuiltin(n))
      throw TypeError(line, 1, "'" + n + "' is reserved");
    if (prog_.findFunction(n))
      throw TypeError(line, 1, "'" + n + "' names a function");
    if (lookup(n))
      throw TypeError(line, 1, "'" + n + "' shadows or redeclares a visible name");
    scopes_.back()[n] = VarInfo{k};
  }

  void checkFunction(FunctionDef &f) {
    fn_ = &f;
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto &g : prog_.globals)
      scopes_.back()[g.name] = VarInfo{VarKind::Int};
    scopes_.emplace_back();
    for (const auto &p : f.params)
      declare(p.name, p.type == Type::Buf ? VarKind::BufRef : VarKind::Int,
              p.line);
    checkStmt(*f.body);
    scopes_.clear();
  }

  /// Right-hand side of an int-valued assignment or declaration.
  void checkIntRhs(Expr &e, int line) {
    if (e.kind == ExprKind::Call && !isBuiltin(e.name)) {
      Type t = checkCall(e);
      if (t != Type::Int)
        throw TypeError(line, 1, "'" + e.name + "' does not return int");
      return;
    }
    Type t = checkExpr(e);
    if (t != Type::Int)
      throw TypeError(line, 1, "expected an int expression, found " +
                                   std::string(toString(t)));
  }

  /// Right-hand side of a buffer declaration or assignment.
  void checkBufRhs(Expr &e, int line) {
    if (e.kind == ExprKind::Call && e.name == "malloc") {
      if (e.operands.size() != 1)
        throw TypeError(line, 1, "malloc takes one argument");
      if (checkExpr(*e.operands[0]) != Type::Int)
        throw TypeError(line, 1, "malloc size must be an int");
      e.type = Type::Buf;
      return;
    }
    if (e.kind == ExprKind::Var) {
      const VarInfo *v = lookup(e.name);
      if (!v)
        throw TypeError(e.line, 1, "use of undeclared '" + e.name + "'");
      if (v->kind == VarKind::Int)
        throw TypeError(line, 1, "cannot assign an int to a buffer");
      e.type = Type::Buf;
      return;
    }
    throw TypeError(line, 1,
                    "a buffer can only be initialized from malloc or a buffer");
  }

  void checkCond(Expr &e) {
    Type t = checkExpr(e);
    if (t != Type::Int && t != Type::Bool)
      throw TypeError(e.line, 1, "condition must be int or boolean");
  }

  void checkStmt(Stmt &s) {
    switch (s.kind) {
    case StmtKind::Block:
      scopes_.emplace_back();
      for (auto &c : s.stmts)
        checkStmt(*c);
      scopes_.pop_back();
      return;
    case StmtKind::Decl:
      if (s.declType == DeclType::Int) {
        if (s.value)
          checkIntRhs(*s.value, s.line);
        declare(s.name, VarKind::Int, s.line);
      } else if (s.declType == DeclType::Array) {
        declare(s.name, VarKind::Array, s.line);
      } else {
        if (s.value)
          checkBufRhs(*s.value, s.line);
        declare(s.name, VarKind::BufRef, s.line);
      }
      return;
    case StmtKind::Assign: {
      const VarInfo *v = lookup(s.name);
      if (!v)
        throw TypeError(s.line, 1, "assignment to undeclared '" + s.name + "'");
      if (s.index) {
        if (v->kind == VarKind::Int)
          throw TypeError(s.line, 1, "'" + s.name + "' is not a buffer");
        if (checkExpr(*s.index) != Type::Int)
          throw TypeError(s.line, 1, "buffer offset must be an int");
        if (checkExpr(*s.value) != Type::Int)
          throw TypeError(s.line, 1, "stored value must be an int");
        return;
      }
      if (v->kind == VarKind::Array)
        throw TypeError(s.line, 1, "cannot assign to array '" + s.name + "'");
      if (v->kind == VarKind::BufRef) {
        if (s.form != AssignForm::Plain)
          throw TypeError(s.line, 1, "cannot increment a buffer");
        checkBufRhs(*s.value, s.line);
        return;
      }
      checkIntRhs(*s.value, s.line);
      return;
    }
    case StmtKind::If:
      checkCond(*s.cond);
      scopes_.emplace_back();
      checkStmt(*s.thenBranch);
      scopes_.pop_back();
      if (s.elseBranch) {
        scopes_.emplace_back();
        checkStmt(*s.elseBranch);
        scopes_.pop_back();
      }
      return;
    case StmtKind::While:
      checkCond(*s.cond);
      scopes_.emplace_back();
      checkStmt(*s.body);
      scopes_.pop_back();
      return;
    case StmtKind::For:
      scopes_.emplace_back();
      for (const StmtPtr *h : {&s.init, &s.step})
        if (*h && (*h)->value && (*h)->value->kind == ExprKind::Call &&
            (*h)->value->name == "malloc")
          throw TypeError(s.line, 1, "malloc in a for header is not supported");
      if (s.init)
        checkStmt(*s.init);
      checkCond(*s.cond);
      if (s.step) {
        if (s.step->kind == StmtKind::Decl)
          throw TypeError(s.line, 1, "declaration in for-step");
        checkStmt(*s.step);
      }
      scopes_.emplace_back();
      checkStmt(*s.body);
      scopes_.pop_back();
      scopes_.pop_back();
      return;
    case StmtKind::Return:
      if (fn_->returnType == Type::Void) {
        if (s.value)
          throw TypeError(s.line, 1, "void function returns a value");
      } else {
        if (!s.value)
          throw TypeError(s.line, 1, "missing return value");
        checkIntRhs(*s.value, s.line);
      }
      return;
    case StmtKind::ExprStmt:
      if (s.value->kind == ExprKind::Call && !isBuiltin(s.value->name)) {
        checkCall(*s.value);
        return;
      }
      checkExpr(*s.value);
      return;
    }
  }

  Type checkCall(Expr &e) {
    const FunctionDef *callee = prog_.findFunction(e.name);
    if (!callee)
      throw TypeError(e.line, 1, "call to undefined function '" + e.name + "'");
    if (callee->params.size() != e.operands.size())
      throw TypeError(e.line, 1, "wrong number of arguments to '" + e.name + "'");
    for (size_t i = 0; i < e.operands.size(); ++i) {
      Expr &a = *e.operands[i];
      if (callee->params[i].type == Type::Buf) {
        if (a.kind != ExprKind::Var)
          throw TypeError(e.line, 1, "buffer argument must be a variable");
        checkBufRhs(a, e.line);
      } else if (checkExpr(a) != Type::Int) {
        throw TypeError(e.line, 1, "argument must be an int");
      }
    }
    calls_[fn_->name].insert(e.name);
    e.type = callee->returnType;
    return e.type;
  }

  Type checkExpr(Expr &e) {
    switch (e.kind) {
    case ExprKind::IntLit:
      return e.type = Type::Int;
    case ExprKind::Var: {
      const VarInfo *v = lookup(e.name);
      if (!v)
        throw TypeError(e.line, 1, "use of undeclared '" + e.name + "'");
      if (v->kind != VarKind::Int)
        throw TypeError(e.line, 1, "buffer '" + e.name + "' used as a value");
      return e.type = Type::Int;
    }
    case ExprKind::SizeOf: {
      const VarInfo *v = lookup(e.name);
      if (!v || v->kind != VarKind::Array)
        throw TypeError(e.line, 1, "sizeof needs a fixed-size array");
      return e.type = Type::Int;
    }
    case ExprKind::Index: {
      const VarInfo *v = lookup(e.name);
      if (!v)
        throw TypeError(e.line, 1, "use of undeclared '" + e.name + "'");
      if (v->kind == VarKind::Int)
        throw TypeError(e.line, 1, "'" + e.name + "' is not a buffer");
      if (checkExpr(*e.operands[0]) != Type::Int)
        throw TypeError(e.line, 1, "buffer offset must be an int");
      return e.type = Type::Int;
    }
    case ExprKind::Call:
      if (e.name == "nondet_int") {
        if (!e.operands.empty())
          throw TypeError(e.line, 1, "nondet_int takes no arguments");
        return e.type = Type::Int;
      }
      if (e.name == "malloc")
        throw TypeError(e.line, 1,
                        "malloc may only initialize or assign a buffer");
      throw TypeError(e.line, 1, "call to '" + e.name +
                                     "' must be a whole statement or "
                                     "assignment right-hand side");
    case ExprKind::Unary: {
      Type t = checkExpr(*e.operands[0]);
      if (e.unOp == UnOp::Neg) {
        if (t != Type::Int)
          throw TypeError(e.line, 1, "negation of a non-int");
        return e.type = Type::Int;
      }
      return e.type = Type::Bool;
    }
    case ExprKind::Binary: {
      Type l = checkExpr(*e.operands[0]);
      Type r = checkExpr(*e.operands[1]);
      if (isLogical(e.binOp))
        return e.type = Type::Bool;
      if (l != Type::Int || r != Type::Int)
        throw TypeError(e.line, 1,
                        std::string("operands of '") + spelling(e.binOp) +
                            "' must be int");
      return e.type = isComparison(e.binOp) ? Type::Bool : Type::Int;
    }
    }
    return Type::Int;
  }

  void checkNoRecursion() {
    std::map<std::string, int> state;
    std::function<void(const std::string &)> visit = [&](const std::string &f) {
      state[f] = 1;
      for (const auto &g : calls_[f]) {
        if (state[g] == 1) {
          const FunctionDef *fd = prog_.findFunction(g);
          throw TypeError(fd ? fd->line : 1, 1,
                          "recursion through '" + g + "' is not supported");
        }
        if (state[g] == 0)
          visit(g);
      }
      state[f] = 2;
    };
    for (const auto &f : prog_.functions)
      if (state[f.name] == 0)
        visit(f.name);
  }

  Program &prog_;
  const FunctionDef *fn_ = nullptr;
  std::vector<Scope> scopes_;
  std::map<std::string, std::set<std::string>> calls_;
};

} // namespace

void typeCheck(Program &p) { Checker(p).run(); }

} // namespace symdeffix
