//===-- Wp.cpp - Backward propagation of crash-free constraints -----------===//

#include "symdeffix/Wp.h"

namespace symdeffix {

const char *toString(RepairMode m) {
  return m == RepairMode::AllPaths ? "AllPaths" : "SingleTrace";
}

namespace {

bool isUserCall(const Expr *e) {
  return e && e->kind == ExprKind::Call && e->name != "nondet_int" &&
         e->name != "malloc";
}

/// Lowering context for one walk: frame-qualified names and a shared havoc
/// counter.
class Walker {
public:
  Walker(const Program &p) : prog_(p), index_(p) {
    for (const auto &g : p.globals)
      globals_.insert(g.name);
  }

  std::string qual(const std::string &n, int frame) const {
    return globals_.count(n) ? n : n + "@" + std::to_string(frame);
  }

  Term havoc() { return Term::symbol("havoc_" + std::to_string(havoc_++)); }

  LeafFn leaf(int frame, const std::string &function) {
    const FunctionDef *fn = prog_.findFunction(function);
    return [this, frame, fn](const Expr &e) -> Term {
      switch (e.kind) {
      case ExprKind::Var:
        return Term::symbol(qual(e.name, frame));
      case ExprKind::SizeOf:
        return Term::constant(arraySizeOf(*fn, e.name));
      case ExprKind::Index:
        return havoc();
      case ExprKind::Call:
        if (e.name == "nondet_int")
          return havoc();
        break;
      default:
        break;
      }
      throw UnsupportedConstruct("call inside an expression at line " +
                                 std::to_string(e.line));
    };
  }

  /// Short-circuit context under which `target` is evaluated inside `e`.
  bool context(const Expr &e, NodeId target, const LeafFn &lf,
               const Constraint &acc, Constraint &out) {
    if (e.id == target) {
      out = acc;
      return true;
    }
    if (e.kind == ExprKind::Binary &&
        (e.binOp == BinOp::And || e.binOp == BinOp::Or)) {
      if (context(e.lhs(), target, lf, acc, out))
        return true;
      Constraint l = lowerCond(e.lhs(), lf);
      return context(e.rhs(), target, lf,
                     acc && (e.binOp == BinOp::And ? l : !l), out);
    }
    for (const auto &o : e.operands)
      if (context(*o, target, lf, acc, out))
        return true;
    return false;
  }

  Constraint crash(const CrashReport &r, const FailingPath &fp) {
    LeafFn lf = leaf(fp.crashFrame, r.function);
    const Expr *op = index_.expr(r.operand);
    if (!op)
      throw std::invalid_argument("crash operand is not in the program");
    Constraint ctx = Constraint::top();
    if (const Stmt *owner = index_.stmt(r.crashStmt))
      for (const Expr *e : ownExprs(*owner))
        if (context(*e, r.crashNode, lf, Constraint::top(), ctx))
          break;
    Term off = lowerTerm(*op, lf);
    Constraint check;
    switch (r.kind) {
    case CheckKind::HeapBoundUpper: {
      Term size = fp.sizeGlobal.empty() ? fp.size : Term::symbol(fp.sizeGlobal);
      check = Constraint::lt(off, size);
      break;
    }
    case CheckKind::HeapBoundLower:
      check = Constraint::ge(off, Term::constant(0));
      break;
    case CheckKind::DivByZero:
      check = Constraint::ne(off, Term::constant(0));
      break;
    }
    return Constraint::implies(ctx, check);
  }

  /// q before the recorded step, given q after it.
  Constraint back(const Constraint &q, const StepRecord &rec) {
    switch (rec.kind) {
    case StepRecord::Kind::Stmt: {
      const Stmt &s = *index_.stmt(rec.node);
      if (isUserCall(s.value.get()))
        return q; // the Return record binds the result
      if (s.kind == StmtKind::Return) {
        if (!s.value)
          return q;
        return q.substitute("$ret@" + std::to_string(rec.frame),
                            lowerTerm(*s.value, leaf(rec.frame, rec.function)));
      }
      return wpStmt(q, s, leaf(rec.frame, rec.function), [&](const std::string &n) {
        return qual(n, rec.frame);
      });
    }
    case StepRecord::Kind::Branch: {
      const Stmt &s = *index_.stmt(rec.node);
      Constraint c = lowerCond(*s.cond, leaf(rec.frame, rec.function));
      return wpBranch(q, rec.taken ? c : !c);
    }
    case StepRecord::Kind::BoundExit:
      return q;
    case StepRecord::Kind::CallEnter: {
      const Stmt &cs = *index_.stmt(rec.node);
      const Expr &call = *cs.value;
      const FunctionDef *callee = prog_.findFunction(call.name);
      const FunctionDef *caller = index_.functionOf(rec.node);
      LeafFn lf = leaf(rec.callerFrame, caller->name);
      std::map<std::string, Term> sub;
      for (size_t i = 0; i < callee->params.size(); ++i)
        if (callee->params[i].type == Type::Int)
          sub[qual(callee->params[i].name, rec.frame)] =
              lowerTerm(*call.operands[i], lf);
      return q.substitute(sub);
    }
    case StepRecord::Kind::Return: {
      const Stmt &cs = *index_.stmt(rec.node);
      Term ret = rec.retStmt == kNoNode
                     ? Term::constant(0)
                     : Term::symbol("$ret@" + std::to_string(rec.frame));
      if (cs.kind == StmtKind::Decl || cs.kind == StmtKind::Assign)
        return q.substitute(qual(cs.name, rec.callerFrame), ret);
      if (cs.kind == StmtKind::Return)
        return q.substitute("$ret@" + std::to_string(rec.callerFrame), ret);
      return q;
    }
    }
    return q;
  }

  /// Drops the `@frame` suffix of the crash frame's variables.
  Constraint unqualify(const Constraint &q, int frame) {
    std::string suffix = "@" + std::to_string(frame);
    std::map<std::string, Term> sub;
    for (const auto &s : q.freeSymbols()) {
      size_t at = s.find('@');
      if (at == std::string::npos)
        continue;
      if (s.substr(at) != suffix)
        throw UnsupportedConstruct("variable '" + s + "' escapes its frame");
      sub[s] = Term::symbol(s.substr(0, at));
    }
    return q.substitute(sub);
  }

  Constraint wpStmt(const Constraint &q, const Stmt &s, const LeafFn &lf,
                    const std::function<std::string(const std::string &)> &name) {
    bool intTarget =
        (s.kind == StmtKind::Decl && s.declType == DeclType::Int) ||
        (s.kind == StmtKind::Assign && !s.index && s.value &&
         s.value->type != Type::Buf);
    if (!intTarget)
      return q;
    Term rhs = s.value ? lowerTerm(*s.value, lf) : Term::constant(0);
    return q.substitute(name(s.name), rhs);
  }

  const ProgramIndex &index() const { return index_; }

private:
  const Program &prog_;
  ProgramIndex index_;
  std::set<std::string> globals_;
  int havoc_ = 0;
};

Constraint prefix(const std::vector<Constraint> &pc, size_t n) {
  std::vector<Constraint> parts(pc.begin(),
                                pc.begin() + std::min(n, pc.size()));
  return Constraint::conj(parts);
}

} // namespace

Constraint crashConstraint(const Program &p, const CrashReport &r,
                           const FailingPath &fp) {
  Walker w(p);
  return w.unqualify(w.crash(r, fp), fp.crashFrame);
}

Constraint wpStmt(const Constraint &q, const Stmt &s, const LeafFn &leaf) {
  bool intTarget =
      (s.kind == StmtKind::Decl && s.declType == DeclType::Int) ||
      (s.kind == StmtKind::Assign && !s.index && s.value &&
       s.value->type != Type::Buf);
  if (!intTarget)
    return q;
  Term rhs = s.value ? lowerTerm(*s.value, leaf) : Term::constant(0);
  return q.substitute(s.name, rhs);
}

Constraint wpStmt(const Constraint &q, const Stmt &s) {
  return wpStmt(q, s, [](const Expr &e) -> Term {
    if (e.kind == ExprKind::Var)
      return Term::symbol(e.name);
    throw UnsupportedConstruct("expression at line " + std::to_string(e.line) +
                               " has no pure term form");
  });
}

Constraint wpBranch(const Constraint &q, const Constraint &literal) {
  return Constraint::implies(literal, q);
}

std::optional<PropagatedConstraint>
propagate(const Program &p, const CrashReport &report, const FixLocation &loc,
          RepairMode mode) {
  if (report.failingPaths.empty())
    return std::nullopt;
  Walker w(p);
  PropagatedConstraint out;
  out.at = loc;
  out.mode = mode;
  size_t npaths = mode == RepairMode::SingleTrace ? 1 : report.failingPaths.size();
  bool guard = loc.kind == FixKind::LoopGuard || loc.kind == FixKind::BranchGuard;
  bool anyPasses = false;
  std::vector<Constraint> parts;

  for (size_t pi = 0; pi < npaths; ++pi) {
    const FailingPath &fp = report.failingPaths[pi];
    const auto &steps = fp.steps;
    size_t end = steps.size();
    if (end && steps[end - 1].kind == StepRecord::Kind::Stmt &&
        steps[end - 1].node == report.crashStmt &&
        steps[end - 1].frame == fp.crashFrame)
      --end;

    // Visits of the location, for the reachability checks of synthesis.
    for (size_t i = 0; i < steps.size(); ++i) {
      const StepRecord &r = steps[i];
      bool match = r.node == loc.node && r.function == loc.function &&
                   (guard ? r.kind == StepRecord::Kind::Branch
                          : r.kind == StepRecord::Kind::Stmt);
      if (match)
        out.visits.push_back({fp.pathId, prefix(fp.pcConjuncts, r.pcSize),
                              r.env, r.taken});
    }
    if (loc.kind == FixKind::InsertBefore)
      out.visits.push_back({fp.pathId, Constraint::conj(fp.pcConjuncts),
                            fp.crashEnv, true});

    // Last visit in the crashing frame.
    std::optional<size_t> at;
    bool taken = true;
    if (loc.kind == FixKind::InsertBefore) {
      if (loc.node == report.crashStmt)
        at = end;
    } else {
      for (size_t i = end; i-- > 0;) {
        const StepRecord &r = steps[i];
        if (r.node != loc.node || r.frame != fp.crashFrame)
          continue;
        if (guard && (r.kind == StepRecord::Kind::Branch ||
                      r.kind == StepRecord::Kind::BoundExit)) {
          at = i;
          taken = r.kind == StepRecord::Kind::Branch && r.taken;
          break;
        }
        if (!guard && r.kind == StepRecord::Kind::Stmt) {
          at = i;
          break;
        }
      }
    }
    if (!at) {
      out.perPath.push_back({fp.pathId, Constraint::top(), true});
      continue;
    }
    anyPasses = true;
    Constraint q = w.crash(report, fp);
    size_t stop = loc.kind == FixKind::InsertBefore ? end : *at + 1;
    for (size_t i = end; i-- > stop;)
      q = w.back(q, steps[i]);
    q = w.unqualify(q, fp.crashFrame);
    if (q.hasOpaque())
      throw UnsupportedConstruct("non-linear constraint at line " +
                                 std::to_string(loc.line));
    out.perPath.push_back({fp.pathId, q, taken});
    parts.push_back(q);
  }
  if (!anyPasses)
    return std::nullopt;
  out.formula = Constraint::conj(parts);
  return out;
}

} // namespace symdeffix
