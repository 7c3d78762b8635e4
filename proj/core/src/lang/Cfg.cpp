//===-- Cfg.cpp - CFG construction and dominance --------------------------===//

#include "symdeffix/Cfg.h"

#include <algorithm>
#include <optional>

namespace symdeffix {

const char *toString(EdgeLabel l) {
  switch (l) {
  case EdgeLabel::Always:
    return "always";
  case EdgeLabel::True:
    return "true";
  case EdgeLabel::False:
    return "false";
  }
  return "?";
}

std::vector<BlockId> Cfg::succs(BlockId b) const {
  std::vector<BlockId> out;
  for (const auto &e : edges)
    if (e.from == b)
      out.push_back(e.to);
  return out;
}

std::vector<BlockId> Cfg::preds(BlockId b) const {
  std::vector<BlockId> out;
  for (const auto &e : edges)
    if (e.to == b)
      out.push_back(e.from);
  return out;
}

const CfgEdge *Cfg::edge(BlockId from, EdgeLabel l) const {
  for (const auto &e : edges)
    if (e.from == from && e.label == l)
      return &e;
  return nullptr;
}

Cfg Cfg::fromEdges(size_t n, const std::vector<CfgEdge> &edges) {
  Cfg g;
  g.blocks.resize(n);
  for (size_t i = 0; i < n; ++i)
    g.blocks[i].id = BlockId(i);
  g.edges = edges;
  g.entry = 0;
  g.exit = n ? BlockId(n - 1) : 0;
  return g;
}

namespace {

class Builder {
public:
  Cfg run(const FunctionDef &fn) {
    BlockId entry = newBlock();
    exit_ = newBlock();
    std::optional<BlockId> end = build(*fn.body, entry);
    if (end)
      addEdge(*end, exit_, EdgeLabel::Always);
    return finish(fn, entry);
  }

private:
  BlockId newBlock() {
    BasicBlock b;
    b.id = BlockId(blocks_.size());
    blocks_.push_back(b);
    return b.id;
  }

  void addEdge(BlockId from, BlockId to, EdgeLabel l, bool back = false) {
    edges_.push_back(CfgEdge{from, to, l, back});
  }

  /// Lowers `s` starting in block `cur`; returns the block where control
  /// continues, or nullopt when every path through `s` returns.
  std::optional<BlockId> build(const Stmt &s, BlockId cur) {
    stmtOf_[s.id] = cur;
    switch (s.kind) {
    case StmtKind::Decl:
    case StmtKind::Assign:
    case StmtKind::ExprStmt:
      blocks_[cur].stmts.push_back(&s);
      return cur;
    case StmtKind::Return:
      blocks_[cur].stmts.push_back(&s);
      addEdge(cur, exit_, EdgeLabel::Always);
      return std::nullopt;
    case StmtKind::Block: {
      std::optional<BlockId> at = cur;
      for (const auto &c : s.stmts) {
        if (!at)
          break; // dead code after a return
        at = build(*c, *at);
      }
      return at;
    }
    case StmtKind::If: {
      blocks_[cur].branch = &s;
      BlockId thenB = newBlock();
      addEdge(cur, thenB, EdgeLabel::True);
      std::optional<BlockId> thenEnd = build(*s.thenBranch, thenB);
      std::optional<BlockId> elseEnd;
      BlockId join = newBlock();
      if (s.elseBranch) {
        BlockId elseB = newBlock();
        addEdge(cur, elseB, EdgeLabel::False);
        elseEnd = build(*s.elseBranch, elseB);
      } else {
        addEdge(cur, join, EdgeLabel::False);
      }
      if (thenEnd)
        addEdge(*thenEnd, join, EdgeLabel::Always);
      if (elseEnd)
        addEdge(*elseEnd, join, EdgeLabel::Always);
      if (!thenEnd && !elseEnd && s.elseBranch)
        return std::nullopt;
      return join;
    }
    case StmtKind::While:
    case StmtKind::For: {
      if (s.kind == StmtKind::For && s.init) {
        std::optional<BlockId> afterInit = build(*s.init, cur);
        cur = *afterInit;
      }
      BlockId header = newBlock();
      stmtOf_[s.id] = header;
      blocks_[header].branch = &s;
      blocks_[header].loopHeader = true;
      addEdge(cur, header, EdgeLabel::Always);
      BlockId body = newBlock();
      addEdge(header, body, EdgeLabel::True);
      std::optional<BlockId> bodyEnd = build(*s.body, body);
      if (bodyEnd) {
        BlockId latch = *bodyEnd;
        if (s.kind == StmtKind::For && s.step) {
          latch = newBlock();
          addEdge(*bodyEnd, latch, EdgeLabel::Always);
          build(*s.step, latch);
        }
        addEdge(latch, header, EdgeLabel::Always, true);
      }
      BlockId after = newBlock();
      addEdge(header, after, EdgeLabel::False);
      return after;
    }
    }
    return cur;
  }

  /// Drops unreachable blocks and renumbers: creation order, exit last.
  Cfg finish(const FunctionDef &fn, BlockId entry) {
    std::vector<bool> reach(blocks_.size(), false);
    std::vector<BlockId> work{entry};
    reach[entry] = true;
    while (!work.empty()) {
      BlockId b = work.back();
      work.pop_back();
      for (const auto &e : edges_)
        if (e.from == b && !reach[e.to]) {
          reach[e.to] = true;
          work.push_back(e.to);
        }
    }
    std::vector<BlockId> order;
    for (BlockId b = 0; b < blocks_.size(); ++b)
      if (reach[b] && b != exit_)
        order.push_back(b);
    order.push_back(exit_);
    std::vector<BlockId> remap(blocks_.size(), BlockId(-1));
    for (BlockId i = 0; i < order.size(); ++i)
      remap[order[i]] = i;

    Cfg g;
    g.fn = &fn;
    for (BlockId old : order) {
      BasicBlock b = blocks_[old];
      b.id = remap[old];
      g.blocks.push_back(b);
    }
    for (const auto &e : edges_)
      if (reach[e.from])
        g.edges.push_back(CfgEdge{remap[e.from], remap[e.to], e.label, e.back});
    for (const auto &[id, b] : stmtOf_)
      if (reach[b])
        g.stmtOf[id] = remap[b];
    g.entry = remap[entry];
    g.exit = remap[exit_];
    return g;
  }

  std::vector<BasicBlock> blocks_;
  std::vector<CfgEdge> edges_;
  std::map<NodeId, BlockId> stmtOf_;
  BlockId exit_ = 0;
};

std::vector<std::set<BlockId>>
iterateDominance(size_t n, BlockId root,
                 const std::vector<std::vector<BlockId>> &into) {
  std::set<BlockId> all;
  for (BlockId b = 0; b < n; ++b)
    all.insert(b);
  std::vector<std::set<BlockId>> dom(n, all);
  dom[root] = {root};
  bool changed = true;
  while (changed) {
    changed = false;
    for (BlockId b = 0; b < n; ++b) {
      if (b == root)
        continue;
      std::set<BlockId> next = all;
      bool any = false;
      for (BlockId p : into[b]) {
        std::set<BlockId> meet;
        std::set_intersection(next.begin(), next.end(), dom[p].begin(),
                              dom[p].end(), std::inserter(meet, meet.end()));
        next.swap(meet);
        any = true;
      }
      if (!any)
        next = all;
      next.insert(b);
      if (next != dom[b]) {
        dom[b].swap(next);
        changed = true;
      }
    }
  }
  return dom;
}

} // namespace

Cfg buildCfg(const FunctionDef &fn) { return Builder().run(fn); }

std::vector<std::set<BlockId>> dominators(const Cfg &cfg) {
  std::vector<std::vector<BlockId>> into(cfg.size());
  for (const auto &e : cfg.edges)
    into[e.to].push_back(e.from);
  return iterateDominance(cfg.size(), cfg.entry, into);
}

std::vector<std::set<BlockId>> postDominators(const Cfg &cfg) {
  std::vector<std::vector<BlockId>> into(cfg.size());
  for (const auto &e : cfg.edges)
    into[e.from].push_back(e.to);
  return iterateDominance(cfg.size(), cfg.exit, into);
}

} // namespace symdeffix
