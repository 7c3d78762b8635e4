//===-- Cfg.h - Per-function control-flow graphs ----------------*- C++ -*-===//

#ifndef SYMDEFFIX_CFG_H
#define SYMDEFFIX_CFG_H

#include "symdeffix/Ast.h"

#include <set>
#include <string>
#include <vector>

namespace symdeffix {

using BlockId = uint32_t;

enum class EdgeLabel { Always, True, False };

const char *toString(EdgeLabel l);

struct CfgEdge {
  BlockId from = 0;
  BlockId to = 0;
  EdgeLabel label = EdgeLabel::Always;
  bool back = false; // loop latch -> header
};

struct BasicBlock {
  BlockId id = 0;
  /// Straight-line statements (Decl, Assign, ExprStmt, Return) in order.
  std::vector<const Stmt *> stmts;
  /// If/While/For whose condition is evaluated at the end of this block.
  const Stmt *branch = nullptr;
  bool loopHeader = false;
};

/// Graph over basic blocks. Block 0 is the entry and has no predecessors;
/// `exit` is the unique sink. Blocks unreachable from the entry (code after
/// a return) are dropped during construction.
struct Cfg {
  const FunctionDef *fn = nullptr;
  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> edges;
  BlockId entry = 0;
  BlockId exit = 0;
  /// Every reachable statement NodeId (compound ones included) -> block.
  std::map<NodeId, BlockId> stmtOf;

  std::vector<BlockId> succs(BlockId b) const;
  std::vector<BlockId> preds(BlockId b) const;
  const CfgEdge *edge(BlockId from, EdgeLabel l) const;
  size_t size() const { return blocks.size(); }

  /// Bare graph with `n` empty blocks, entry 0 and exit n-1. Used by tests
  /// and by analyses that do not need statements.
  static Cfg fromEdges(size_t n, const std::vector<CfgEdge> &edges);
};

Cfg buildCfg(const FunctionDef &fn);

/// Classical iterative dominator sets: result[b] = blocks dominating b.
std::vector<std::set<BlockId>> dominators(const Cfg &cfg);
/// Post-dominators relative to `cfg.exit`. Blocks that cannot reach the
/// exit post-dominate nothing and are post-dominated by every block.
std::vector<std::set<BlockId>> postDominators(const Cfg &cfg);

} // namespace symdeffix

#endif
