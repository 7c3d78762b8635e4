//===-- Ast.h - Typed AST for the Mini-C subset -----------------*- C++ -*-===//
//
// Nodes own their children through unique_ptr; Program is a value type whose
// copy is a deep clone that preserves NodeIds, so a patched program can be
// diffed and re-executed next to the original.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_AST_H
#define SYMDEFFIX_AST_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symdeffix {

using NodeId = uint32_t;
constexpr NodeId kNoNode = 0;

enum class Type { Int, Bool, Buf, Void };

const char *toString(Type t);

struct SourceError : std::runtime_error {
  SourceError(const std::string &kind, int line, int column,
              const std::string &msg);
  int line;
  int column;
  std::string message;
};

struct SyntaxError : SourceError {
  SyntaxError(int line, int column, const std::string &msg)
      : SourceError("syntax error", line, column, msg) {}
};

struct TypeError : SourceError {
  TypeError(int line, int column, const std::string &msg)
      : SourceError("type error", line, column, msg) {}
};

enum class ExprKind { IntLit, Var, Binary, Unary, Index, Call, SizeOf };

enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Neg, Not };

const char *spelling(BinOp op);
const char *spelling(UnOp op);
bool isComparison(BinOp op);
bool isLogical(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  NodeId id = kNoNode;
  int line = 0;
  Type type = Type::Int;

  int64_t value = 0;  // IntLit
  std::string name;   // Var, Call (callee), SizeOf (array), Index (buffer)
  BinOp binOp = BinOp::Add;
  UnOp unOp = UnOp::Neg;
  std::vector<ExprPtr> operands; // Binary: lhs, rhs; Unary: operand;
                                 // Index: offset; Call: arguments

  ExprPtr clone() const;
  const Expr &lhs() const { return *operands[0]; }
  const Expr &rhs() const { return *operands[1]; }
};

enum class StmtKind { Decl, Assign, If, While, For, Return, ExprStmt, Block };

/// Declared type of a local: `int x`, `char a[K]` (fixed array), or a
/// buffer reference written `buf p` / `char *p` / `int *p`.
enum class DeclType { Int, Array, BufRef };

/// `x++` and `x--` are assignments that remember their surface form.
enum class AssignForm { Plain, PostInc, PostDec };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Block;
  NodeId id = kNoNode;
  int line = 0;
  /// Inserted by instrumentation rather than written by the user.
  bool synthetic = false;

  // Decl
  DeclType declType = DeclType::Int;
  std::string typeSpelling; // "int", "char", "buf", "char *", "int *"
  int64_t arraySize = 0;

  // Decl / Assign target name; Assign store when `index` is set.
  std::string name;
  ExprPtr index;
  AssignForm form = AssignForm::Plain;

  // Decl initializer, Assign value, Return value, ExprStmt expression,
  // If/While/For condition.
  ExprPtr value;
  ExprPtr cond;

  StmtPtr thenBranch, elseBranch; // If
  StmtPtr init, step, body;       // For (init/step optional), While body
  std::vector<StmtPtr> stmts;     // Block

  StmtPtr clone() const;
  bool isStore() const { return kind == StmtKind::Assign && index != nullptr; }
};

struct Param {
  NodeId id = kNoNode;
  int line = 0;
  Type type = Type::Int;
  std::string typeSpelling;
  std::string name;
};

struct FunctionDef {
  NodeId id = kNoNode;
  int line = 0;
  Type returnType = Type::Int;
  std::string name;
  std::vector<Param> params;
  StmtPtr body; // Block

  FunctionDef() = default;
  FunctionDef(const FunctionDef &o);
  FunctionDef &operator=(const FunctionDef &o);
  FunctionDef(FunctionDef &&) = default;
  FunctionDef &operator=(FunctionDef &&) = default;
};

struct GlobalDecl {
  NodeId id = kNoNode;
  int line = 0;
  std::string name;
  int64_t init = 0;
  bool synthetic = false;
};

/// Size global introduced for one malloc call site.
struct MallocSiteGlobal {
  std::string name;
  int siteLine = 0;
  NodeId mallocCall = kNoNode; // the Call expression
  std::string fileStem;
};

struct Program {
  std::vector<GlobalDecl> globals;
  std::vector<FunctionDef> functions;
  std::string sourcePath;
  NodeId nextId = 1;

  bool instrumented = false;
  std::vector<MallocSiteGlobal> mallocGlobals;

  NodeId freshId() { return nextId++; }
  const FunctionDef *findFunction(const std::string &name) const;
  FunctionDef *findFunction(const std::string &name);
  const GlobalDecl *findGlobal(const std::string &name) const;
  /// Malloc-site global for a malloc Call node, or nullptr.
  const MallocSiteGlobal *mallocGlobalFor(NodeId call) const;
};

//===----------------------------------------------------------------------===//
// Node lookup
//===----------------------------------------------------------------------===//

/// Non-owning view of every node in a Program, keyed by NodeId. Invalidated
/// by any structural edit of the Program it indexes.
class ProgramIndex {
public:
  explicit ProgramIndex(const Program &p);

  const Stmt *stmt(NodeId id) const;
  const Expr *expr(NodeId id) const;
  /// Innermost statement containing the node (the node itself for stmts).
  const Stmt *enclosingStmt(NodeId id) const;
  /// Parent statement of a statement (nullptr for a function body).
  const Stmt *parentStmt(NodeId stmtId) const;
  const FunctionDef *functionOf(NodeId id) const;
  const std::vector<NodeId> &allIds() const { return ids_; }

private:
  void indexStmt(const Stmt &s, const Stmt *parent, const FunctionDef &fn);
  void indexExpr(const Expr &e, const Stmt &owner, const FunctionDef &fn);

  std::map<NodeId, const Stmt *> stmts_;
  std::map<NodeId, const Expr *> exprs_;
  std::map<NodeId, const Stmt *> owner_;
  std::map<NodeId, const Stmt *> parent_;
  std::map<NodeId, const FunctionDef *> fn_;
  std::vector<NodeId> ids_;
};

/// Mutable lookup used by patching and instrumentation.
Stmt *findStmt(Program &p, NodeId id);
Expr *findExpr(Program &p, NodeId id);

/// Calls `fn` on every expression node under `e` (pre-order).
template <typename F> void forEachExpr(const Expr &e, F &&fn) {
  fn(e);
  for (const auto &o : e.operands)
    forEachExpr(*o, fn);
}

/// Expressions owned directly by `s` (not by nested statements).
std::vector<const Expr *> ownExprs(const Stmt &s);
/// Statements nested directly under `s`.
std::vector<const Stmt *> childStmts(const Stmt &s);

/// Structural equality ignoring NodeIds and line numbers.
bool structurallyEqual(const Expr &a, const Expr &b);
bool structurallyEqual(const Stmt &a, const Stmt &b);
bool structurallyEqual(const Program &a, const Program &b);

} // namespace symdeffix

#endif
