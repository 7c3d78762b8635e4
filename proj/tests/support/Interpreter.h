//===-- Interpreter.h - Concrete reference interpreter ----------*- C++ -*-===//
//
// Test-only. Runs a Mini-C program on concrete inputs by walking the AST
// directly (no CFG, no solver) and stops at the first out-of-bounds access
// or zero divisor. Used as the brute-force oracle for the engine.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_TESTS_INTERPRETER_H
#define SYMDEFFIX_TESTS_INTERPRETER_H

#include "symdeffix/Ast.h"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symdeffix::testing {

struct ConcreteCrash {
  std::string kind; // "upper", "lower", "div"
  int line = 0;
  NodeId node = kNoNode;
};

struct ConcreteRun {
  std::optional<ConcreteCrash> crash;
  int64_t returned = 0;
  bool outOfFuel = false;
};

class Interpreter {
public:
  Interpreter(const Program &p, std::vector<int64_t> inputs, bool heap = true,
              bool div = true, long fuel = 100000)
      : p_(p), inputs_(std::move(inputs)), heap_(heap), div_(div),
        fuel_(fuel) {}

  ConcreteRun run() {
    ConcreteRun r;
    for (const auto &g : p_.globals)
      globals_[g.name] = g.init;
    try {
      r.returned = call(*p_.findFunction("main"), {});
    } catch (const Crash &c) {
      r.crash = c.info;
    } catch (const OutOfFuel &) {
      r.outOfFuel = true;
    }
    return r;
  }

private:
  struct Crash {
    ConcreteCrash info;
  };
  struct OutOfFuel {};
  struct Returned {
    int64_t value;
  };
  struct Buffer {
    int64_t size = 0;
    std::map<int64_t, int64_t> cells;
  };
  struct Slot {
    bool isBuf = false;
    int64_t value = 0;
    int buffer = -1;
  };
  using Env = std::map<std::string, Slot>;

  int64_t call(const FunctionDef &fn, const std::vector<Slot> &args) {
    Env env;
    for (size_t i = 0; i < fn.params.size(); ++i)
      env[fn.params[i].name] = args[i];
    envs_.push_back(&env);
    int64_t result = 0;
    try {
      exec(*fn.body);
    } catch (const Returned &r) {
      result = r.value;
    }
    envs_.pop_back();
    return result;
  }

  Env &env() { return *envs_.back(); }

  Slot &slot(const std::string &n) {
    auto it = env().find(n);
    if (it != env().end())
      return it->second;
    auto g = globalSlots_.find(n);
    if (g == globalSlots_.end()) {
      Slot s;
      s.value = globals_.at(n);
      g = globalSlots_.emplace(n, s).first;
    }
    return g->second;
  }

  int64_t readVar(const std::string &n) {
    auto it = env().find(n);
    if (it != env().end())
      return it->second.value;
    auto g = globalSlots_.find(n);
    if (g != globalSlots_.end())
      return g->second.value;
    return globals_.at(n);
  }

  void writeVar(const std::string &n, int64_t v) {
    auto it = env().find(n);
    if (it != env().end()) {
      it->second.value = v;
      return;
    }
    slot(n).value = v;
  }

  void tick() {
    if (--fuel_ < 0)
      throw OutOfFuel{};
  }

  void checkAccess(int buf, int64_t off, int line, NodeId node) {
    if (!heap_)
      return;
    int64_t size = buf < 0 ? 0 : bufs_[buf].size;
    if (off >= size)
      throw Crash{{"upper", line, node}};
    if (off < 0)
      throw Crash{{"lower", line, node}};
  }

  int newBuffer(int64_t size) {
    Buffer b;
    b.size = size;
    bufs_.push_back(b);
    return int(bufs_.size() - 1);
  }

  Slot evalBuf(const Expr &e) {
    Slot s;
    s.isBuf = true;
    if (e.kind == ExprKind::Call) {
      s.buffer = newBuffer(eval(*e.operands[0]));
      return s;
    }
    return slot(e.name);
  }

  int64_t userCall(const Expr &e) {
    const FunctionDef &fn = *p_.findFunction(e.name);
    std::vector<Slot> args;
    for (size_t i = 0; i < e.operands.size(); ++i) {
      if (fn.params[i].type == Type::Buf) {
        args.push_back(slot(e.operands[i]->name));
      } else {
        Slot s;
        s.value = eval(*e.operands[i]);
        args.push_back(s);
      }
    }
    return call(fn, args);
  }

  int64_t eval(const Expr &e) {
    switch (e.kind) {
    case ExprKind::IntLit:
      return e.value;
    case ExprKind::Var:
      return readVar(e.name);
    case ExprKind::SizeOf:
      return bufs_[slot(e.name).buffer].size;
    case ExprKind::Index: {
      int buf = slot(e.name).buffer;
      int64_t off = eval(*e.operands[0]);
      checkAccess(buf, off, e.line, e.id);
      if (buf < 0)
        return 0;
      auto it = bufs_[buf].cells.find(off);
      return it == bufs_[buf].cells.end() ? 0 : it->second;
    }
    case ExprKind::Call:
      if (e.name == "nondet_int") {
        if (next_ >= inputs_.size())
          throw std::runtime_error("interpreter ran out of inputs");
        return inputs_[next_++];
      }
      return userCall(e);
    case ExprKind::Unary:
      if (e.unOp == UnOp::Neg)
        return -eval(*e.operands[0]);
      return eval(*e.operands[0]) == 0 ? 1 : 0;
    case ExprKind::Binary: {
      if (e.binOp == BinOp::And)
        return eval(e.lhs()) != 0 && eval(e.rhs()) != 0;
      if (e.binOp == BinOp::Or)
        return eval(e.lhs()) != 0 || eval(e.rhs()) != 0;
      int64_t a = eval(e.lhs());
      int64_t b = eval(e.rhs());
      switch (e.binOp) {
      case BinOp::Add:
        return a + b;
      case BinOp::Sub:
        return a - b;
      case BinOp::Mul:
        return a * b;
      case BinOp::Div:
      case BinOp::Mod:
        if (b == 0) {
          if (div_)
            throw Crash{{"div", e.line, e.id}};
          return 0;
        }
        return e.binOp == BinOp::Div ? a / b : a % b;
      case BinOp::Lt:
        return a < b;
      case BinOp::Le:
        return a <= b;
      case BinOp::Gt:
        return a > b;
      case BinOp::Ge:
        return a >= b;
      case BinOp::Eq:
        return a == b;
      case BinOp::Ne:
        return a != b;
      default:
        return 0;
      }
    }
    }
    return 0;
  }

  void exec(const Stmt &s) {
    tick();
    switch (s.kind) {
    case StmtKind::Block:
      for (const auto &c : s.stmts)
        exec(*c);
      return;
    case StmtKind::Decl: {
      Slot v;
      if (s.declType == DeclType::Array) {
        v.isBuf = true;
        v.buffer = newBuffer(s.arraySize);
      } else if (s.declType == DeclType::BufRef) {
        v.isBuf = true;
        if (s.value)
          v = evalBuf(*s.value);
      } else if (s.value) {
        v.value = eval(*s.value);
      }
      env()[s.name] = v;
      return;
    }
    case StmtKind::Assign: {
      if (s.index) {
        int buf = slot(s.name).buffer;
        int64_t off = eval(*s.index);
        int64_t val = eval(*s.value);
        checkAccess(buf, off, s.line, s.id);
        if (buf >= 0)
          bufs_[buf].cells[off] = val;
        return;
      }
      if (slot(s.name).isBuf) {
        Slot v = evalBuf(*s.value);
        slot(s.name) = v;
        return;
      }
      writeVar(s.name, eval(*s.value));
      return;
    }
    case StmtKind::If:
      if (eval(*s.cond) != 0)
        exec(*s.thenBranch);
      else if (s.elseBranch)
        exec(*s.elseBranch);
      return;
    case StmtKind::While:
      while (eval(*s.cond) != 0) {
        tick();
        exec(*s.body);
      }
      return;
    case StmtKind::For:
      if (s.init)
        exec(*s.init);
      while (eval(*s.cond) != 0) {
        tick();
        exec(*s.body);
        if (s.step)
          exec(*s.step);
      }
      return;
    case StmtKind::Return:
      throw Returned{s.value ? eval(*s.value) : 0};
    case StmtKind::ExprStmt:
      eval(*s.value);
      return;
    }
  }

  const Program &p_;
  std::vector<int64_t> inputs_;
  size_t next_ = 0;
  bool heap_, div_;
  long fuel_;
  std::vector<Env *> envs_;
  std::map<std::string, int64_t> globals_;
  std::map<std::string, Slot> globalSlots_;
  std::vector<Buffer> bufs_;
};

/// Number of nondet_int() calls appearing in the program text.
inline size_t countNondetCalls(const Program &p) {
  size_t n = 0;
  ProgramIndex idx(p);
  for (NodeId id : idx.allIds())
    if (const Expr *e = idx.expr(id))
      n += e->kind == ExprKind::Call && e->name == "nondet_int" ? 1 : 0;
  return n;
}

} // namespace symdeffix::testing

#endif
