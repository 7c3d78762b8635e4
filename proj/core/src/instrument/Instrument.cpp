//===-- Instrument.cpp ----------------------------------------------------===//

#include "symdeffix/Instrument.h"
#include "symdeffix/Lower.h"
#include "symdeffix/Printer.h"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>

namespace symdeffix {

const char *toString(CheckKind k) {
  switch (k) {
  case CheckKind::HeapBoundUpper:
    return "HeapBoundUpper";
  case CheckKind::HeapBoundLower:
    return "HeapBoundLower";
  case CheckKind::DivByZero:
    return "DivByZero";
  }
  return "?";
}

ErrorClasses ErrorClasses::parse(const std::string &s) {
  if (s == "all")
    return all();
  if (s == "heap-overflow")
    return {true, false};
  if (s == "divide-by-zero")
    return {false, true};
  throw std::invalid_argument("unknown error class '" + s + "'");
}

std::string fileStem(const std::string &path) {
  std::string stem = std::filesystem::path(path).stem().string();
  for (char &c : stem)
    if (!std::isalnum((unsigned char)c) && c != '_')
      c = '_';
  if (stem.empty())
    stem = "input";
  return stem;
}

namespace {

/// Malloc call directly on the right-hand side of `s`, if any.
Expr *mallocOf(Stmt &s) {
  if ((s.kind == StmtKind::Decl || s.kind == StmtKind::Assign) && s.value &&
      s.value->kind == ExprKind::Call && s.value->name == "malloc")
    return s.value.get();
  return nullptr;
}

void collectMallocStmts(Stmt &s, std::vector<Stmt *> &out) {
  if (mallocOf(s))
    out.push_back(&s);
  for (StmtPtr *p : {&s.init, &s.thenBranch, &s.elseBranch, &s.body, &s.step})
    if (*p)
      collectMallocStmts(**p, out);
  for (auto &c : s.stmts)
    collectMallocStmts(*c, out);
}

std::set<std::string> allNames(const Program &p) {
  std::set<std::string> names;
  ProgramIndex idx(p);
  for (const auto &g : p.globals)
    names.insert(g.name);
  for (const auto &f : p.functions) {
    names.insert(f.name);
    for (const auto &pr : f.params)
      names.insert(pr.name);
  }
  for (NodeId id : idx.allIds())
    if (const Stmt *s = idx.stmt(id))
      if (!s->name.empty())
        names.insert(s->name);
  return names;
}

/// Replaces the statement `target` (found by id under `s`) by `repl(old)`.
template <typename F> bool replaceStmt(StmtPtr &slot, NodeId target, F &&repl) {
  if (!slot)
    return false;
  if (slot->id == target) {
    slot = repl(std::move(slot));
    return true;
  }
  for (StmtPtr *p : {&slot->init, &slot->thenBranch, &slot->elseBranch,
                     &slot->body, &slot->step})
    if (replaceStmt(*p, target, repl))
      return true;
  for (auto &c : slot->stmts)
    if (replaceStmt(c, target, repl))
      return true;
  return false;
}

} // namespace

std::vector<MallocSiteGlobal> insertMallocGlobals(Program &p) {
  if (p.instrumented)
    return p.mallocGlobals;
  std::string stem = fileStem(p.sourcePath);
  std::set<std::string> taken = allNames(p);

  std::vector<Stmt *> sites;
  for (auto &f : p.functions)
    collectMallocStmts(*f.body, sites);
  std::sort(sites.begin(), sites.end(), [](const Stmt *a, const Stmt *b) {
    return mallocOf(const_cast<Stmt &>(*a))->id <
           mallocOf(const_cast<Stmt &>(*b))->id;
  });
  std::map<int, int> perLine;
  for (Stmt *s : sites)
    ++perLine[mallocOf(*s)->line];

  std::map<int, int> ordinal;
  std::vector<std::pair<NodeId, MallocSiteGlobal>> planned;
  for (Stmt *s : sites) {
    Expr *call = mallocOf(*s);
    MallocSiteGlobal g;
    g.siteLine = call->line;
    g.fileStem = stem;
    g.mallocCall = call->id;
    g.name = "GLOBAL_MS__" + stem + "__malloc_" + std::to_string(call->line);
    if (perLine[call->line] > 1)
      g.name += "_" + std::to_string(ordinal[call->line]++);
    while (taken.count(g.name))
      g.name += "_";
    taken.insert(g.name);
    planned.push_back({s->id, g});
  }

  for (auto &[stmtId, g] : planned) {
    Stmt *s = findStmt(p, stmtId);
    Expr *call = mallocOf(*s);
    auto assign = std::make_unique<Stmt>();
    assign->kind = StmtKind::Assign;
    assign->id = p.freshId();
    assign->line = call->line;
    assign->synthetic = true;
    assign->name = g.name;
    assign->value = std::move(call->operands[0]);
    auto var = std::make_unique<Expr>();
    var->kind = ExprKind::Var;
    var->id = p.freshId();
    var->line = call->line;
    var->name = g.name;
    call->operands[0] = std::move(var);

    GlobalDecl gd;
    gd.id = p.freshId();
    gd.line = call->line;
    gd.name = g.name;
    gd.synthetic = true;
    p.globals.push_back(gd);

    // Splice `G = size;` in front of the malloc statement.
    NodeId blockId = kNoNode;
    for (auto &f : p.functions) {
      ProgramIndex idx(p);
      const Stmt *parent = idx.parentStmt(stmtId);
      if (idx.functionOf(stmtId) != &f)
        continue;
      if (parent && parent->kind == StmtKind::Block) {
        blockId = parent->id;
        Stmt *blk = findStmt(p, blockId);
        for (size_t i = 0; i < blk->stmts.size(); ++i)
          if (blk->stmts[i]->id == stmtId) {
            blk->stmts.insert(blk->stmts.begin() + i, std::move(assign));
            break;
          }
      } else {
        NodeId blk = p.freshId();
        replaceStmt(f.body, stmtId, [&](StmtPtr old) {
          auto b = std::make_unique<Stmt>();
          b->kind = StmtKind::Block;
          b->id = blk;
          b->line = old->line;
          b->synthetic = true;
          b->stmts.push_back(std::move(assign));
          b->stmts.push_back(std::move(old));
          return b;
        });
      }
      break;
    }
    p.mallocGlobals.push_back(g);
  }
  p.instrumented = true;
  return p.mallocGlobals;
}

std::vector<SanitizerCheck> insertSanitizerChecks(const Program &p,
                                                  ErrorClasses classes) {
  std::vector<SanitizerCheck> out;
  ProgramIndex idx(p);
  for (const auto &f : p.functions) {
    // Offsets may contain calls or buffer reads; those leaves become
    // opaque placeholders in the static check (the engine uses values).
    LeafFn leaf = [&f](const Expr &e) -> Term {
      if (e.kind == ExprKind::Var)
        return Term::symbol(e.name);
      if (e.kind == ExprKind::SizeOf)
        return Term::constant(arraySizeOf(f, e.name));
      return Term::symbol("#" + std::to_string(e.id));
    };
    auto heap = [&](NodeId guarded, NodeId stmt, int line,
                    const std::string &buffer, const Expr &offset) {
      Term off = lowerTerm(offset, leaf);
      SanitizerCheck up;
      up.kind = CheckKind::HeapBoundUpper;
      up.guardedNode = guarded;
      up.stmt = stmt;
      up.line = line;
      up.function = f.name;
      up.buffer = buffer;
      up.operand = offset.id;
      up.check = Constraint::lt(off, Term::symbol("size(" + buffer + ")"));
      SanitizerCheck lo = up;
      lo.kind = CheckKind::HeapBoundLower;
      lo.check = Constraint::ge(off, Term::constant(0));
      out.push_back(up);
      out.push_back(lo);
    };
    for (NodeId id : idx.allIds()) {
      if (idx.functionOf(id) != &f)
        continue;
      if (const Stmt *s = idx.stmt(id)) {
        if (s->isStore() && classes.heapOverflow)
          heap(s->id, s->id, s->line, s->name, *s->index);
        continue;
      }
      const Expr *e = idx.expr(id);
      if (!e)
        continue;
      const Stmt *owner = idx.enclosingStmt(id);
      if (e->kind == ExprKind::Index && classes.heapOverflow)
        heap(e->id, owner->id, e->line, e->name, *e->operands[0]);
      if (e->kind == ExprKind::Binary &&
          (e->binOp == BinOp::Div || e->binOp == BinOp::Mod) &&
          classes.divideByZero) {
        SanitizerCheck c;
        c.kind = CheckKind::DivByZero;
        c.guardedNode = e->id;
        c.stmt = owner->id;
        c.line = e->line;
        c.function = f.name;
        c.operand = e->rhs().id;
        c.check = Constraint::ne(lowerTerm(e->rhs(), leaf), Term::constant(0));
        out.push_back(c);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SanitizerCheck &a, const SanitizerCheck &b) {
                     return a.guardedNode < b.guardedNode;
                   });
  return out;
}

std::string writeInstrumented(const Program &p, const std::string &outDir) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(outDir) / fileStem(p.sourcePath);
  fs::create_directories(dir);
  fs::path file = dir / "instrumented.c";
  std::ofstream out(file, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write '" + file.string() + "'");
  out << printProgram(p);
  return file.string();
}

} // namespace symdeffix
