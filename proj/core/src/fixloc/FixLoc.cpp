//===-- FixLoc.cpp - Control and data dependence localization -------------===//

#include "symdeffix/FixLoc.h"
#include "symdeffix/Dataflow.h"

#include <algorithm>
#include <deque>
#include <tuple>

namespace symdeffix {

const char *toString(FixKind k) {
  switch (k) {
  case FixKind::LoopGuard:
    return "LoopGuard";
  case FixKind::BranchGuard:
    return "BranchGuard";
  case FixKind::AssignRhs:
    return "AssignRhs";
  case FixKind::InsertBefore:
    return "InsertBefore";
  }
  return "?";
}

namespace {

struct Visible {
  std::vector<std::pair<std::string, DeclType>> names;
  void add(const Stmt &d) {
    if (d.kind == StmtKind::Decl)
      names.push_back({d.name, d.declType});
  }
};

bool findScope(const Stmt &s, NodeId target, Visible vis, Visible &out) {
  if (s.id == target && s.kind != StmtKind::For) {
    out = vis;
    return true;
  }
  switch (s.kind) {
  case StmtKind::Block:
    for (const auto &c : s.stmts) {
      if (findScope(*c, target, vis, out))
        return true;
      vis.add(*c);
    }
    return false;
  case StmtKind::If:
    return findScope(*s.thenBranch, target, vis, out) ||
           (s.elseBranch && findScope(*s.elseBranch, target, vis, out));
  case StmtKind::While:
    return findScope(*s.body, target, vis, out);
  case StmtKind::For:
    if (s.init) {
      if (findScope(*s.init, target, vis, out))
        return true;
      vis.add(*s.init);
    }
    if (s.id == target) {
      out = vis;
      return true;
    }
    return (s.step && findScope(*s.step, target, vis, out)) ||
           findScope(*s.body, target, vis, out);
  default:
    return false;
  }
}

/// Shortest forward distance in edges from `from` to `to`.
unsigned distanceBetween(const Cfg &cfg, BlockId from, BlockId to) {
  std::vector<unsigned> dist(cfg.size(), ~0u);
  std::deque<BlockId> q{from};
  dist[from] = 0;
  while (!q.empty()) {
    BlockId b = q.front();
    q.pop_front();
    if (b == to)
      return dist[b];
    for (BlockId n : cfg.succs(b))
      if (dist[n] == ~0u) {
        dist[n] = dist[b] + 1;
        q.push_back(n);
      }
  }
  return ~0u;
}

size_t positionIn(const BasicBlock &b, NodeId stmt) {
  for (size_t i = 0; i < b.stmts.size(); ++i)
    if (b.stmts[i]->id == stmt)
      return i;
  return b.stmts.size(); // the block's branch
}

bool isUserCall(const Expr *e) {
  return e && e->kind == ExprKind::Call && e->name != "nondet_int" &&
         e->name != "malloc";
}

} // namespace

void scopeAt(const Program &p, NodeId stmt, std::set<std::string> &vars,
             std::set<std::string> &arrays) {
  for (const auto &g : p.globals)
    vars.insert(g.name);
  ProgramIndex idx(p);
  const FunctionDef *fn = idx.functionOf(stmt);
  if (!fn)
    return;
  for (const auto &prm : fn->params)
    if (prm.type == Type::Int)
      vars.insert(prm.name);
  Visible out;
  findScope(*fn->body, stmt, Visible{}, out);
  for (const auto &[n, t] : out.names) {
    if (t == DeclType::Int)
      vars.insert(n);
    else if (t == DeclType::Array)
      arrays.insert(n);
  }
}

std::set<BlockId> controlDependences(const Cfg &cfg, BlockId block) {
  auto pdom = postDominators(cfg);
  auto dependsOn = [&](BlockId c, BlockId b) {
    if (pdom[b].count(c) && c != b)
      return false; // c strictly post-dominates b
    for (BlockId s : cfg.succs(b))
      if (pdom[s].count(c))
        return true;
    return false;
  };
  std::set<BlockId> out;
  std::vector<BlockId> work{block};
  std::set<BlockId> seen{block};
  while (!work.empty()) {
    BlockId c = work.back();
    work.pop_back();
    for (BlockId b = 0; b < cfg.size(); ++b) {
      if (!cfg.blocks[b].branch || !dependsOn(c, b))
        continue;
      out.insert(b);
      if (seen.insert(b).second)
        work.push_back(b);
    }
  }
  return out;
}

std::vector<FixLocation> findFixLocations(const Program &p, const Cfg &cfg,
                                          const CrashReport &report,
                                          size_t cap) {
  ProgramIndex idx(p);
  auto cb = cfg.stmtOf.find(report.crashStmt);
  if (cb == cfg.stmtOf.end())
    throw std::invalid_argument("crash statement is not in the CFG");
  BlockId crashBlock = cb->second;
  size_t crashPos = positionIn(cfg.blocks[crashBlock], report.crashStmt);
  auto dom = dominators(cfg);

  auto dominatesCrash = [&](NodeId stmt) {
    auto it = cfg.stmtOf.find(stmt);
    if (it == cfg.stmtOf.end() || !dom[crashBlock].count(it->second))
      return false;
    if (it->second != crashBlock)
      return true;
    return positionIn(cfg.blocks[crashBlock], stmt) < crashPos;
  };

  struct Cand {
    FixLocation loc;
    size_t pos;
  };
  std::vector<Cand> cands;
  std::set<NodeId> taken;
  auto add = [&](const Stmt &s, FixKind k) {
    if (s.synthetic || !taken.insert(s.id).second)
      return;
    Cand c;
    c.loc.node = s.id;
    c.loc.line = s.line;
    c.loc.kind = k;
    c.loc.function = report.function;
    BlockId b = cfg.stmtOf.at(s.id);
    c.loc.distance = distanceBetween(cfg, b, crashBlock);
    c.pos = positionIn(cfg.blocks[b], s.id);
    scopeAt(p, s.id, c.loc.scopeVars, c.loc.scopeArrays);
    cands.push_back(std::move(c));
  };

  // Control dependence.
  for (BlockId b : controlDependences(cfg, crashBlock)) {
    if (b == crashBlock || !dom[crashBlock].count(b))
      continue;
    const Stmt *br = cfg.blocks[b].branch;
    add(*br, br->kind == StmtKind::If ? FixKind::BranchGuard
                                      : FixKind::LoopGuard);
  }

  // Transitive def-use from the variables of the crash-free constraint.
  auto chains = defUseChains(cfg);
  std::set<std::string> roots;
  if (const Expr *op = idx.expr(report.operand))
    roots = usedVars(*op);
  if (!report.failingPaths.empty() &&
      !report.failingPaths.front().sizeGlobal.empty())
    roots.insert(report.failingPaths.front().sizeGlobal);
  std::vector<UseSite> work;
  for (const auto &v : roots)
    work.push_back({report.crashStmt, v});
  std::set<NodeId> seenDefs;
  while (!work.empty()) {
    UseSite u = work.back();
    work.pop_back();
    auto it = chains.find(u);
    if (it == chains.end())
      continue;
    for (NodeId d : it->second) {
      if (!seenDefs.insert(d).second)
        continue;
      const Stmt *ds = idx.stmt(d);
      if (!ds)
        continue; // parameter
      for (const auto &v : usedVars(*ds))
        work.push_back({d, v});
      bool intDef = (ds->kind == StmtKind::Decl &&
                     ds->declType == DeclType::Int && ds->value) ||
                    (ds->kind == StmtKind::Assign && !ds->index &&
                     ds->value && ds->value->type != Type::Buf);
      if (intDef && !isUserCall(ds->value.get()) && dominatesCrash(d))
        add(*ds, FixKind::AssignRhs);
    }
  }

  std::sort(cands.begin(), cands.end(), [](const Cand &a, const Cand &b) {
    return std::make_tuple(a.loc.distance, b.pos, a.loc.line, a.loc.node) <
           std::make_tuple(b.loc.distance, a.pos, b.loc.line, b.loc.node);
  });

  // The crash statement itself, wrapped in a new guard.
  const Stmt *cs = idx.stmt(report.crashStmt);
  const Stmt *parent = idx.parentStmt(report.crashStmt);
  bool header = parent && parent->kind == StmtKind::For &&
                (parent->init.get() == cs || parent->step.get() == cs);
  bool wrappable = cs->kind == StmtKind::Assign ||
                   cs->kind == StmtKind::ExprStmt ||
                   cs->kind == StmtKind::Return || cs->kind == StmtKind::If;
  if (wrappable && !header && !cs->synthetic) {
    Cand c;
    c.loc.node = cs->id;
    c.loc.line = cs->line;
    c.loc.kind = FixKind::InsertBefore;
    c.loc.function = report.function;
    c.pos = crashPos;
    scopeAt(p, cs->id, c.loc.scopeVars, c.loc.scopeArrays);
    cands.push_back(std::move(c));
  }

  if (cands.empty())
    throw EmptyCandidates();
  std::vector<FixLocation> out;
  for (auto &c : cands) {
    if (out.size() >= cap)
      break;
    c.loc.rank = int(out.size()) + 1;
    out.push_back(std::move(c.loc));
  }
  return out;
}

} // namespace symdeffix
