//===-- Synth.cpp - Size-ordered enumeration and patch application --------===//

#include "symdeffix/Synth.h"
#include "symdeffix/Printer.h"

#include <algorithm>
#include <filesystem>

namespace symdeffix {

const char *toString(PatchTemplate t) {
  switch (t) {
  case PatchTemplate::GuardStrengthen:
    return "GuardStrengthen";
  case PatchTemplate::GuardInsert:
    return "GuardInsert";
  case PatchTemplate::RhsReplace:
    return "RhsReplace";
  case PatchTemplate::GuardReplace:
    return "GuardReplace";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;
using ExprRef = std::shared_ptr<const Expr>;

ExprRef leafExpr(ExprKind k, const std::string &name, int64_t value) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->name = name;
  e->value = value;
  e->type = Type::Int;
  return e;
}

ExprRef binary(BinOp op, const Expr &a, const Expr &b) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Binary;
  e->binOp = op;
  e->type = isComparison(op) || isLogical(op) ? Type::Bool : Type::Int;
  e->operands.push_back(a.clone());
  e->operands.push_back(b.clone());
  return e;
}

ExprRef negation(const Expr &a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Unary;
  e->unOp = UnOp::Not;
  e->type = Type::Bool;
  e->operands.push_back(a.clone());
  return e;
}

struct TermCand {
  ExprRef e;
  Term t;
};

struct CondCand {
  ExprRef e;
  Constraint c;
  bool atom = true;
};

/// Bottom-up enumeration, one size level at a time, deduplicated by the
/// canonical form of the lowered term or constraint.
class Enumerator {
public:
  Enumerator(std::vector<TermCand> terminals, Clock::time_point deadline)
      : deadline_(deadline) {
    terms_.resize(2);
    conds_.resize(2);
    for (auto &t : terminals)
      if (termSeen_.insert(t.t.str()).second)
        terms_[1].push_back(std::move(t));
  }

  bool expired() const { return Clock::now() > deadline_; }

  const std::vector<TermCand> &terms(unsigned size) {
    while (terms_.size() <= size)
      buildTerms(unsigned(terms_.size()));
    return terms_[size];
  }

  const std::vector<CondCand> &conds(unsigned size) {
    while (conds_.size() <= size)
      buildConds(unsigned(conds_.size()));
    return conds_[size];
  }

private:
  static constexpr size_t kLevelCap = 200000;

  bool tick() { return (++ticks_ & 255) != 0 || !expired(); }

  void buildTerms(unsigned size) {
    std::vector<TermCand> level;
    for (unsigned ls = 1; ls + 2 <= size; ++ls) {
      unsigned rs = size - 1 - ls;
      for (const auto &a : terms(ls))
        for (const auto &b : terms(rs))
          for (BinOp op : {BinOp::Add, BinOp::Sub}) {
            if (!tick() || level.size() >= kLevelCap)
              goto done;
            Term t = op == BinOp::Add ? a.t + b.t : a.t - b.t;
            if (t.isConstant() || !termSeen_.insert(t.str()).second)
              continue;
            level.push_back({binary(op, *a.e, *b.e), t});
          }
    }
  done:
    terms_.push_back(std::move(level));
  }

  void add(std::vector<CondCand> &level, ExprRef e, Constraint c, bool atom) {
    if (c.isTrue() || c.isFalse() || !condSeen_.insert(c.str()).second)
      return;
    level.push_back({std::move(e), std::move(c), atom});
  }

  void buildConds(unsigned size) {
    std::vector<CondCand> level;
    if (size >= 3)
      terms(size - 2); // build first; the loops below hold references
    static const BinOp cmps[] = {BinOp::Lt, BinOp::Le, BinOp::Eq, BinOp::Ne};
    for (unsigned ls = 1; ls + 2 <= size; ++ls) {
      unsigned rs = size - 1 - ls;
      for (const auto &a : terms(ls))
        for (const auto &b : terms(rs))
          for (BinOp op : cmps) {
            if (!tick() || level.size() >= kLevelCap)
              goto done;
            Constraint c;
            switch (op) {
            case BinOp::Lt:
              c = Constraint::lt(a.t, b.t);
              break;
            case BinOp::Le:
              c = Constraint::le(a.t, b.t);
              break;
            case BinOp::Eq:
              c = Constraint::eq(a.t, b.t);
              break;
            default:
              c = Constraint::ne(a.t, b.t);
              break;
            }
            add(level, binary(op, *a.e, *b.e), c, true);
          }
    }
    if (size >= 4)
      for (const auto &a : conds(size - 1)) {
        if (a.atom)
          continue; // negated atoms are atoms again
        if (!tick())
          goto done;
        add(level, negation(*a.e), !a.c, false);
      }
    for (unsigned ls = 3; ls + 4 <= size; ++ls) {
      unsigned rs = size - 1 - ls;
      if (rs < ls)
        break;
      const auto &as = conds(ls);
      const auto &bs = conds(rs);
      for (size_t i = 0; i < as.size(); ++i)
        for (size_t j = ls == rs ? i + 1 : 0; j < bs.size(); ++j)
          for (BinOp op : {BinOp::And, BinOp::Or}) {
            if (!tick() || level.size() >= kLevelCap)
              goto done;
            Constraint c = op == BinOp::And ? as[i].c && bs[j].c
                                            : as[i].c || bs[j].c;
            add(level, binary(op, *as[i].e, *bs[j].e), c, false);
          }
    }
  done:
    conds_.push_back(std::move(level));
  }

  Clock::time_point deadline_;
  std::vector<std::vector<TermCand>> terms_;
  std::vector<std::vector<CondCand>> conds_;
  std::set<std::string> termSeen_, condSeen_;
  unsigned ticks_ = 0;
};

bool hasInput(const Expr &e) {
  bool found = false;
  forEachExpr(e, [&](const Expr &x) {
    found |= x.kind == ExprKind::Call && x.name == "nondet_int";
  });
  return found;
}

struct Accepted {
  PatchTemplate tmpl;
  size_t order;
  ExprRef e;
  Constraint c; // conditions only
  bool dominated = false;
};

class Synthesizer {
public:
  Synthesizer(const Program &p, const PropagatedConstraint &pc,
              const SynthBudget &budget)
      : prog_(p), pc_(pc), budget_(budget), index_(p) {
    SolverOptions o;
    o.timeout = budget.solverTimeout;
    solver_ = Solver(o);
    deadline_ = Clock::now() + budget.timeout;
  }

  SynthResult run() {
    const FixLocation &loc = pc_.at;
    stmt_ = index_.stmt(loc.node);
    fn_ = index_.functionOf(loc.node);
    if (!stmt_ || !fn_)
      throw NodeNotFound("fix location " + std::to_string(loc.node) +
                         " is not in the program");
    LeafFn lf = leaf();
    SynthResult out;
    std::vector<PatchTemplate> templates;
    switch (loc.kind) {
    case FixKind::LoopGuard:
    case FixKind::BranchGuard: {
      guard_ = lowerCond(*stmt_->cond, lf);
      if (valid(replaceFormula(guard_))) {
        out.verdict = SynthVerdict::AlreadySafe;
        return out;
      }
      bool allTaken = std::all_of(pc_.perPath.begin(), pc_.perPath.end(),
                                  [](const PathConstraint &p) { return p.taken; });
      if (allTaken)
        templates.push_back(PatchTemplate::GuardStrengthen);
      templates.push_back(PatchTemplate::GuardReplace);
      break;
    }
    case FixKind::AssignRhs:
      if (!stmt_->value || hasInput(*stmt_->value))
        throw BudgetExhausted("right-hand side reads an input");
      if (valid(pc_.formula.substitute(stmt_->name,
                                       lowerTerm(*stmt_->value, lf)))) {
        out.verdict = SynthVerdict::AlreadySafe;
        return out;
      }
      templates.push_back(PatchTemplate::RhsReplace);
      break;
    case FixKind::InsertBefore:
      if (valid(pc_.formula)) {
        out.verdict = SynthVerdict::AlreadySafe;
        return out;
      }
      templates.push_back(PatchTemplate::GuardInsert);
      break;
    }

    Enumerator en(terminals(), deadline_);
    bool rhs = templates.front() == PatchTemplate::RhsReplace;
    for (unsigned size = 1; size <= budget_.maxExprSize; ++size) {
      std::vector<Accepted> level;
      size_t order = 0;
      if (rhs) {
        for (const auto &t : en.terms(size)) {
          if (en.expired())
            break;
          ++out.candidates;
          if (valid(pc_.formula.substitute(stmt_->name, t.t)))
            level.push_back({PatchTemplate::RhsReplace, order, t.e, {}});
          ++order;
        }
      } else {
        for (const auto &c : en.conds(size)) {
          if (en.expired())
            break;
          ++out.candidates;
          for (PatchTemplate t : templates)
            if (valid(formulaFor(t, c.c)) && reachable(patchedGuard(t, c.c)))
              level.push_back({t, order, c.e, c.c});
          ++order;
        }
        rankByWeakness(level);
      }
      std::stable_sort(level.begin(), level.end(),
                       [](const Accepted &a, const Accepted &b) {
                         if (a.tmpl != b.tmpl)
                           return a.tmpl < b.tmpl;
                         if (a.dominated != b.dominated)
                           return !a.dominated;
                         return a.order < b.order;
                       });
      for (const auto &a : level) {
        if (out.patches.size() >= budget_.maxPatches)
          break;
        Patch p;
        p.loc = loc;
        p.tmpl = a.tmpl;
        p.expr = a.e;
        p.size = size;
        out.patches.push_back(std::move(p));
      }
      if (out.patches.size() >= budget_.maxPatches || en.expired())
        break;
    }
    if (out.patches.empty())
      throw BudgetExhausted("no patch within size " +
                            std::to_string(budget_.maxExprSize) + " at line " +
                            std::to_string(loc.line));
    return out;
  }

private:
  LeafFn leaf() {
    const FunctionDef *fn = fn_;
    return [this, fn](const Expr &e) -> Term {
      if (e.kind == ExprKind::Var)
        return Term::symbol(e.name);
      if (e.kind == ExprKind::SizeOf)
        return Term::constant(arraySizeOf(*fn, e.name));
      return Term::symbol("guard_havoc_" + std::to_string(havoc_++));
    };
  }

  std::vector<TermCand> terminals() {
    std::vector<TermCand> out;
    for (const auto &v : pc_.at.scopeVars)
      out.push_back({leafExpr(ExprKind::Var, v, 0), Term::symbol(v)});
    for (const auto &a : pc_.at.scopeArrays)
      out.push_back({leafExpr(ExprKind::SizeOf, a, 0),
                     Term::constant(arraySizeOf(*fn_, a))});
    for (int64_t k : harvestConstants(prog_))
      out.push_back({leafExpr(ExprKind::IntLit, "", k), Term::constant(k)});
    return out;
  }

  Constraint replaceFormula(const Constraint &e) const {
    std::vector<Constraint> parts;
    for (const auto &p : pc_.perPath)
      parts.push_back(Constraint::implies(p.taken ? e : !e, p.formula));
    return Constraint::conj(parts);
  }

  Constraint formulaFor(PatchTemplate t, const Constraint &e) const {
    switch (t) {
    case PatchTemplate::GuardStrengthen:
      return Constraint::implies(guard_ && e, pc_.formula);
    case PatchTemplate::GuardReplace:
      return replaceFormula(e);
    default:
      return Constraint::implies(e, pc_.formula);
    }
  }

  Constraint patchedGuard(PatchTemplate t, const Constraint &e) const {
    return t == PatchTemplate::GuardStrengthen ? guard_ && e : e;
  }

  bool valid(const Constraint &f) {
    for (const auto &m : cex_) {
      try {
        if (!f.evaluate(m))
          return false;
      } catch (const std::exception &) {
      }
    }
    ValidityResult r = solver_.checkValid(f);
    if (r.verdict == Validity::Invalid && cex_.size() < 64)
      cex_.push_back(r.counterModel);
    return r.verdict == Validity::Valid;
  }

  /// Anti-triviality: the patched guard holds at some recorded visit.
  bool reachable(const Constraint &g) {
    size_t n = 0;
    for (const auto &v : pc_.visits) {
      if (++n > 64)
        break;
      Constraint at = v.reach && g.substitute(v.env);
      if (at.isFalse())
        continue;
      if (solver_.checkSat(at).verdict != Verdict::Unsat)
        return true;
    }
    return false;
  }

  /// Marks candidates strictly stronger than another accepted one of the
  /// same template.
  void rankByWeakness(std::vector<Accepted> &level) {
    const size_t cap = 48;
    auto implies = [&](PatchTemplate t, const Constraint &a, const Constraint &b) {
      Constraint ctx = t == PatchTemplate::GuardStrengthen ? guard_
                                                           : Constraint::top();
      return solver_.checkValid(Constraint::implies(ctx && a, b)).verdict ==
             Validity::Valid;
    };
    for (size_t i = 0; i < level.size() && i < cap; ++i)
      for (size_t j = 0; j < level.size() && j < cap; ++j) {
        if (i == j || level[i].tmpl != level[j].tmpl)
          continue;
        if (implies(level[i].tmpl, level[i].c, level[j].c) &&
            !implies(level[i].tmpl, level[j].c, level[i].c)) {
          level[i].dominated = true;
          break;
        }
      }
    for (size_t i = cap; i < level.size(); ++i)
      level[i].dominated = true;
  }

  const Program &prog_;
  const PropagatedConstraint &pc_;
  SynthBudget budget_;
  ProgramIndex index_;
  Solver solver_;
  Clock::time_point deadline_;
  const Stmt *stmt_ = nullptr;
  const FunctionDef *fn_ = nullptr;
  Constraint guard_;
  std::vector<Model> cex_;
  int havoc_ = 0;
};

ExprPtr instantiate(const Expr &e, Program &p, int line) {
  ExprPtr out = e.clone();
  std::function<void(Expr &)> walk = [&](Expr &x) {
    x.id = p.freshId();
    x.line = line;
    for (auto &o : x.operands)
      walk(*o);
  };
  walk(*out);
  return out;
}

StmtPtr *owningSlot(Stmt &parent, NodeId child) {
  for (auto &s : parent.stmts)
    if (s->id == child)
      return &s;
  for (StmtPtr *slot : {&parent.thenBranch, &parent.elseBranch, &parent.body,
                        &parent.init, &parent.step})
    if (*slot && (*slot)->id == child)
      return slot;
  return nullptr;
}

} // namespace

std::vector<int64_t> harvestConstants(const Program &p) {
  std::set<int64_t> ks{0, 1};
  ProgramIndex idx(p);
  for (NodeId id : idx.allIds()) {
    const Expr *e = idx.expr(id);
    if (!e || e->kind != ExprKind::IntLit)
      continue;
    const Stmt *owner = idx.enclosingStmt(id);
    if (owner && !owner->synthetic)
      ks.insert(e->value);
  }
  return {ks.begin(), ks.end()};
}

SynthResult synthesize(const Program &p, const PropagatedConstraint &pc,
                       const SynthBudget &budget) {
  return Synthesizer(p, pc, budget).run();
}

Program applyPatch(const Program &p, Patch &patch) {
  Program q = p;
  Stmt *s = findStmt(q, patch.loc.node);
  if (!s || !patch.expr)
    throw NodeNotFound("patch location " + std::to_string(patch.loc.node) +
                       " is not in the program");
  ExprPtr e = instantiate(*patch.expr, q, s->line);
  switch (patch.tmpl) {
  case PatchTemplate::GuardStrengthen: {
    if (!s->cond)
      throw NodeNotFound("patch location has no guard");
    auto conj = std::make_unique<Expr>();
    conj->kind = ExprKind::Binary;
    conj->binOp = BinOp::And;
    conj->type = Type::Bool;
    conj->id = q.freshId();
    conj->line = s->line;
    conj->operands.push_back(std::move(s->cond));
    conj->operands.push_back(std::move(e));
    s->cond = std::move(conj);
    break;
  }
  case PatchTemplate::GuardReplace:
    if (!s->cond)
      throw NodeNotFound("patch location has no guard");
    s->cond = std::move(e);
    break;
  case PatchTemplate::RhsReplace:
    s->value = std::move(e);
    s->form = AssignForm::Plain;
    break;
  case PatchTemplate::GuardInsert: {
    ProgramIndex idx(q);
    const Stmt *parent = idx.parentStmt(s->id);
    Stmt *mparent = parent ? findStmt(q, parent->id) : nullptr;
    StmtPtr *slot = mparent ? owningSlot(*mparent, s->id) : nullptr;
    if (!slot)
      throw NodeNotFound("statement " + std::to_string(s->id) +
                         " has no enclosing statement");
    auto wrap = std::make_unique<Stmt>();
    wrap->kind = StmtKind::If;
    wrap->id = q.freshId();
    wrap->line = s->line;
    wrap->cond = std::move(e);
    wrap->thenBranch = std::move(*slot);
    *slot = std::move(wrap);
    break;
  }
  }
  std::string name = std::filesystem::path(p.sourcePath).filename().string();
  patch.diff = unifiedDiff(printProgram(p), printProgram(q),
                           name.empty() ? "input.c" : name);
  return q;
}

} // namespace symdeffix
