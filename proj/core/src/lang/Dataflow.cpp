//===-- Dataflow.cpp ------------------------------------------------------===//

#include "symdeffix/Dataflow.h"

namespace symdeffix {

std::vector<std::set<NodeId>>
reachingIn(const Cfg &cfg, const std::vector<std::vector<DefSite>> &blockDefs) {
  size_t n = cfg.size();
  std::map<NodeId, std::string> varOf;
  for (const auto &defs : blockDefs)
    for (const auto &d : defs)
      varOf[d.node] = d.var;

  // gen = last def of each var in the block; kill = every var it defines.
  std::vector<std::map<std::string, NodeId>> gen(n);
  for (size_t b = 0; b < n && b < blockDefs.size(); ++b)
    for (const auto &d : blockDefs[b])
      gen[b][d.var] = d.node;

  std::vector<std::set<NodeId>> in(n), out(n);
  std::vector<std::vector<BlockId>> preds(n);
  for (const auto &e : cfg.edges)
    preds[e.to].push_back(e.from);
  bool changed = true;
  while (changed) {
    changed = false;
    for (BlockId b = 0; b < n; ++b) {
      std::set<NodeId> nin;
      for (BlockId p : preds[b])
        nin.insert(out[p].begin(), out[p].end());
      std::set<NodeId> nout;
      for (NodeId d : nin)
        if (!gen[b].count(varOf[d]))
          nout.insert(d);
      for (const auto &[v, d] : gen[b])
        nout.insert(d);
      if (nin != in[b] || nout != out[b]) {
        in[b].swap(nin);
        out[b].swap(nout);
        changed = true;
      }
    }
  }
  return in;
}

std::string definedVar(const Stmt &s) {
  if (s.kind == StmtKind::Decl && s.declType != DeclType::Array)
    return s.name;
  if (s.kind == StmtKind::Assign && !s.index)
    return s.name;
  return "";
}

std::set<std::string> usedVars(const Expr &e) {
  std::set<std::string> out;
  forEachExpr(e, [&](const Expr &x) {
    if (x.kind == ExprKind::Var || x.kind == ExprKind::Index)
      out.insert(x.name);
  });
  return out;
}

std::set<std::string> usedVars(const Stmt &s) {
  std::set<std::string> out;
  auto add = [&](const ExprPtr &e) {
    if (e) {
      auto u = usedVars(*e);
      out.insert(u.begin(), u.end());
    }
  };
  switch (s.kind) {
  case StmtKind::If:
  case StmtKind::While:
  case StmtKind::For:
    add(s.cond);
    break;
  case StmtKind::Assign:
    if (s.index)
      out.insert(s.name);
    add(s.index);
    add(s.value);
    break;
  case StmtKind::Decl:
  case StmtKind::Return:
  case StmtKind::ExprStmt:
    add(s.value);
    break;
  case StmtKind::Block:
    break;
  }
  return out;
}

std::map<UseSite, std::set<NodeId>> defUseChains(const Cfg &cfg) {
  std::vector<std::vector<DefSite>> defs(cfg.size());
  std::map<NodeId, std::string> varOf;
  if (cfg.fn)
    for (const auto &p : cfg.fn->params) {
      defs[cfg.entry].push_back({p.id, p.name});
      varOf[p.id] = p.name;
    }
  for (const auto &b : cfg.blocks)
    for (const Stmt *s : b.stmts) {
      std::string v = definedVar(*s);
      if (!v.empty()) {
        defs[b.id].push_back({s->id, v});
        varOf[s->id] = v;
      }
    }
  auto in = reachingIn(cfg, defs);

  std::map<UseSite, std::set<NodeId>> chains;
  for (const auto &b : cfg.blocks) {
    // Current reaching definition per variable, walked through the block.
    std::map<std::string, std::set<NodeId>> live;
    for (NodeId d : in[b.id])
      live[varOf[d]].insert(d);
    if (b.id == cfg.entry && cfg.fn)
      for (const auto &p : cfg.fn->params)
        live[p.name] = {p.id};
    auto record = [&](const Stmt &s) {
      for (const auto &v : usedVars(s)) {
        auto &set = chains[UseSite{s.id, v}];
        auto it = live.find(v);
        if (it != live.end())
          set.insert(it->second.begin(), it->second.end());
      }
    };
    for (const Stmt *s : b.stmts) {
      record(*s);
      std::string v = definedVar(*s);
      if (!v.empty())
        live[v] = {s->id};
    }
    if (b.branch)
      record(*b.branch);
  }
  return chains;
}

} // namespace symdeffix
