//===-- Executor.cpp - Path enumeration over CFGs -------------------------===//

#include "symdeffix/Symex.h"
#include "symdeffix/Printer.h"

#include <algorithm>

namespace symdeffix {

const Term &PathState::intValue(const std::string &name) const {
  const Frame &f = frames.back();
  auto it = f.env.find(name);
  if (it != f.env.end()) {
    if (const Term *t = std::get_if<Term>(&it->second))
      return *t;
    throw std::logic_error("'" + name + "' holds a buffer");
  }
  auto g = globals.find(name);
  if (g != globals.end())
    return g->second;
  throw std::logic_error("undefined variable '" + name + "'");
}

namespace {

bool isUserCall(const Expr *e) {
  return e && e->kind == ExprKind::Call && e->name != "nondet_int" &&
         e->name != "malloc";
}

Constraint checkConstraint(CheckKind k, const Term &operand, const Term &size) {
  switch (k) {
  case CheckKind::HeapBoundUpper:
    return Constraint::lt(operand, size);
  case CheckKind::HeapBoundLower:
    return Constraint::ge(operand, Term::constant(0));
  case CheckKind::DivByZero:
    return Constraint::ne(operand, Term::constant(0));
  }
  return Constraint::top();
}

int kindOrder(CheckKind k) { return static_cast<int>(k); }

} // namespace

Executor::Executor(const Program &p, std::vector<SanitizerCheck> checks,
                   ExecBounds bounds)
    : prog_(p), index_(p), bounds_(bounds) {
  for (const auto &f : p.functions)
    cfgs_.emplace(f.name, buildCfg(f));
  for (auto &c : checks) {
    if (c.kind == CheckKind::DivByZero ? !bounds.classes.divideByZero
                                       : !bounds.classes.heapOverflow)
      continue;
    checks_[c.guardedNode].push_back(std::move(c));
  }
  SolverOptions o;
  o.timeout = bounds.solverTimeout;
  solver_ = Solver(o);
}

PathState Executor::initialState() const {
  PathState s;
  for (const auto &g : prog_.globals)
    s.globals[g.name] = Term::constant(g.init);
  Frame f;
  f.function = "main";
  f.id = s.nextFrame++;
  f.cfg = &cfgs_.at("main");
  f.block = f.cfg->entry;
  s.frames.push_back(std::move(f));
  s.trace.push_back({"IN", "main"});
  return s;
}

ExecutionResult Executor::execute() {
  result_ = ExecutionResult();
  reportIndex_.clear();
  std::vector<PathState> work;
  work.push_back(initialState());
  while (!work.empty()) {
    if (result_.pathsExplored >= bounds_.maxPaths) {
      result_.boundHit = true;
      break;
    }
    PathState s = std::move(work.back());
    work.pop_back();
    for (;;) {
      std::vector<PathState> next = step(std::move(s));
      if (next.empty()) {
        ++result_.pathsExplored;
        break;
      }
      if (next.size() == 1) {
        if (next[0].finished) {
          ++result_.pathsExplored;
          result_.boundHit |= next[0].boundHit;
          break;
        }
        s = std::move(next[0]);
        continue;
      }
      for (auto it = next.rbegin(); it != next.rend(); ++it)
        work.push_back(std::move(*it));
      break;
    }
  }
  finishReports();
  return result_;
}

void Executor::finishReports() {
  for (auto &r : result_.reports) {
    r.cfc = renderCfc(r, prog_);
    r.trace = r.failingPaths.front().trace;
    r.unconfirmed = std::all_of(r.failingPaths.begin(), r.failingPaths.end(),
                                [](const FailingPath &fp) { return !fp.confirmed; });
  }
  std::stable_sort(result_.reports.begin(), result_.reports.end(),
                   [](const CrashReport &a, const CrashReport &b) {
                     if (a.crashLine != b.crashLine)
                       return a.crashLine < b.crashLine;
                     if (a.kind != b.kind)
                       return kindOrder(a.kind) < kindOrder(b.kind);
                     return a.failingPaths.front().pathId <
                            b.failingPaths.front().pathId;
                   });
}

std::vector<PathState> Executor::step(PathState s) {
  if (s.finished || s.killed)
    return {};
  Frame &f = s.top();
  const BasicBlock &b = f.cfg->blocks[f.block];
  if (f.index < b.stmts.size())
    return execStmt(std::move(s), *b.stmts[f.index]);
  if (b.branch)
    return branch(std::move(s), *b.branch);
  if (f.block == f.cfg->exit) {
    std::optional<Term> v;
    const FunctionDef *fn = prog_.findFunction(f.function);
    if (fn->returnType == Type::Int)
      v = Term::constant(0);
    returnFrom(s, v, kNoNode);
    std::vector<PathState> out;
    out.push_back(std::move(s));
    return out;
  }
  auto succ = f.cfg->succs(f.block);
  const CfgEdge *e = f.cfg->edge(f.block, EdgeLabel::Always);
  enterBlock(s, succ.at(0), e && e->back);
  std::vector<PathState> out;
  out.push_back(std::move(s));
  return out;
}

std::map<std::string, Term> Executor::snapshot(const PathState &s) const {
  std::map<std::string, Term> env = s.globals;
  for (const auto &[n, v] : s.top().env)
    if (const Term *t = std::get_if<Term>(&v))
      env[n] = *t;
  return env;
}

std::vector<PathState> Executor::execStmt(PathState s, const Stmt &st) {
  StepRecord rec;
  rec.kind = StepRecord::Kind::Stmt;
  rec.node = st.id;
  rec.frame = s.top().id;
  rec.function = s.top().function;
  rec.pcSize = s.pc.size();
  rec.env = snapshot(s);
  s.steps.push_back(std::move(rec));

  const Constraint top = Constraint::top();
  auto done = [&]() {
    std::vector<PathState> out;
    if (!s.killed) {
      ++s.top().index;
      out.push_back(std::move(s));
    }
    return out;
  };
  auto single = [&]() {
    std::vector<PathState> out;
    out.push_back(std::move(s));
    return out;
  };
  auto bufferRhs = [&](const Expr &e) -> BufRef {
    if (e.kind == ExprKind::Call) { // malloc
      Term size = evalTerm(s, *e.operands[0], top);
      const MallocSiteGlobal *g = prog_.mallocGlobalFor(e.id);
      return BufRef{allocate(s, size, e.id, e.line, g ? g->name : "")};
    }
    return std::get<BufRef>(lookup(s, e.name));
  };

  switch (st.kind) {
  case StmtKind::Decl:
    if (st.declType == DeclType::Array) {
      int id = allocate(s, Term::constant(st.arraySize), st.id, st.line, "");
      s.top().env[st.name] = BufRef{id};
      return done();
    }
    if (st.declType == DeclType::BufRef) {
      s.top().env[st.name] = st.value ? bufferRhs(*st.value) : BufRef{};
      return done();
    }
    if (isUserCall(st.value.get())) {
      pushCall(s, *st.value, st.id);
      return single();
    }
    s.top().env[st.name] =
        st.value ? evalTerm(s, *st.value, top) : Term::constant(0);
    return done();
  case StmtKind::Assign: {
    if (st.index) {
      BufRef buf = std::get<BufRef>(lookup(s, st.name));
      Term off = evalTerm(s, *st.index, top);
      Term val = evalTerm(s, *st.value, top);
      auto it = checks_.find(st.id);
      if (it != checks_.end()) {
        Term size = Term::constant(0);
        std::string sizeGlobal;
        if (buf.allocId >= 0) {
          size = s.heap.at(buf.allocId).record.size;
          sizeGlobal = s.heap.at(buf.allocId).record.sizeGlobal;
        }
        for (const auto &c : it->second) {
          runCheck(s, c, top, off, size, sizeGlobal);
          if (s.killed)
            return {};
        }
      }
      if (buf.allocId >= 0)
        s.heap.at(buf.allocId).writes.push_back({off, val});
      return done();
    }
    Value cur = lookup(s, st.name);
    if (std::holds_alternative<BufRef>(cur)) {
      assign(s, st.name, bufferRhs(*st.value));
      return done();
    }
    if (isUserCall(st.value.get())) {
      pushCall(s, *st.value, st.id);
      return single();
    }
    Term v = evalTerm(s, *st.value, top);
    if (s.killed)
      return {};
    assign(s, st.name, v);
    return done();
  }
  case StmtKind::ExprStmt:
    if (isUserCall(st.value.get())) {
      pushCall(s, *st.value, st.id);
      return single();
    }
    if (st.value->type == Type::Bool)
      evalCond(s, *st.value, top);
    else
      evalValue(s, *st.value, top);
    return done();
  case StmtKind::Return: {
    if (isUserCall(st.value.get())) {
      pushCall(s, *st.value, st.id);
      return single();
    }
    std::optional<Term> v;
    if (st.value)
      v = evalTerm(s, *st.value, top);
    if (s.killed)
      return {};
    returnFrom(s, v, st.id);
    return single();
  }
  default:
    throw std::logic_error("compound statement inside a basic block");
  }
}

std::vector<PathState> Executor::branch(PathState s, const Stmt &br) {
  Frame &f = s.top();
  const Cfg &cfg = *f.cfg;
  BlockId here = f.block;
  bool loop = cfg.blocks[here].loopHeader;
  const CfgEdge *tEdge = cfg.edge(here, EdgeLabel::True);
  const CfgEdge *fEdge = cfg.edge(here, EdgeLabel::False);

  if (loop && f.unroll[br.id] >= bounds_.unroll) {
    StepRecord rec;
    rec.kind = StepRecord::Kind::BoundExit;
    rec.node = br.id;
    rec.frame = f.id;
    rec.function = f.function;
    rec.pcSize = s.pc.size();
    s.steps.push_back(std::move(rec));
    s.boundHit = true;
    enterBlock(s, fEdge->to, false);
    std::vector<PathState> out;
    out.push_back(std::move(s));
    return out;
  }

  std::map<std::string, Term> env = snapshot(s);
  size_t pcBefore = s.pc.size();
  Constraint cond = evalCond(s, *br.cond, Constraint::top());
  if (s.killed)
    return {};

  std::vector<PathState> out;
  for (bool taken : {true, false}) {
    Constraint lit = taken ? cond : !cond;
    if (!feasible(s, lit))
      continue;
    PathState child = s;
    if (!lit.isTrue())
      child.pc.push_back(lit);
    child.pathId.push_back(taken ? '0' : '1');
    StepRecord rec;
    rec.kind = StepRecord::Kind::Branch;
    rec.node = br.id;
    rec.frame = child.top().id;
    rec.function = child.top().function;
    rec.taken = taken;
    rec.pcSize = pcBefore;
    rec.env = env;
    child.steps.push_back(std::move(rec));
    if (loop && taken)
      ++child.top().unroll[br.id];
    enterBlock(child, (taken ? tEdge : fEdge)->to, false);
    out.push_back(std::move(child));
  }
  return out;
}

void Executor::enterBlock(PathState &s, BlockId to, bool back) {
  Frame &f = s.top();
  f.block = to;
  f.index = 0;
  const BasicBlock &b = f.cfg->blocks[to];
  if (b.loopHeader && !back)
    f.unroll.erase(b.branch->id);
}

void Executor::pushCall(PathState &s, const Expr &call, NodeId callStmt) {
  const FunctionDef *callee = prog_.findFunction(call.name);
  Frame f;
  f.function = callee->name;
  f.cfg = &cfgs_.at(callee->name);
  f.block = f.cfg->entry;
  f.callStmt = callStmt;
  for (size_t i = 0; i < callee->params.size(); ++i) {
    const Param &p = callee->params[i];
    if (p.type == Type::Buf)
      f.env[p.name] = lookup(s, call.operands[i]->name);
    else
      f.env[p.name] = evalTerm(s, *call.operands[i], Constraint::top());
  }
  f.id = s.nextFrame++;
  StepRecord rec;
  rec.kind = StepRecord::Kind::CallEnter;
  rec.node = callStmt;
  rec.frame = f.id;
  rec.callerFrame = s.top().id;
  rec.function = callee->name;
  rec.pcSize = s.pc.size();
  s.steps.push_back(std::move(rec));
  s.trace.push_back({"IN", callee->name});
  s.frames.push_back(std::move(f));
}

void Executor::returnFrom(PathState &s, std::optional<Term> value,
                          NodeId retStmt) {
  Frame callee = std::move(s.frames.back());
  s.trace.push_back({"OUT", callee.function});
  if (s.frames.size() == 1) {
    s.frames.pop_back();
    s.finished = true;
    s.returnValue = value;
    return;
  }
  s.frames.pop_back();
  StepRecord rec;
  rec.kind = StepRecord::Kind::Return;
  rec.node = callee.callStmt;
  rec.frame = callee.id;
  rec.callerFrame = s.top().id;
  rec.function = callee.function;
  rec.retStmt = retStmt;
  rec.pcSize = s.pc.size();
  s.steps.push_back(std::move(rec));

  const Stmt &cs = *index_.stmt(callee.callStmt);
  switch (cs.kind) {
  case StmtKind::Decl:
    s.top().env[cs.name] = value.value_or(Term::constant(0));
    break;
  case StmtKind::Assign:
    assign(s, cs.name, value.value_or(Term::constant(0)));
    break;
  case StmtKind::Return:
    returnFrom(s, value, cs.id);
    return;
  default:
    break;
  }
  ++s.top().index;
}

int Executor::allocate(PathState &s, const Term &size, NodeId site, int line,
                       const std::string &sizeGlobal) {
  Allocation a;
  a.record.allocId = s.nextAlloc++;
  a.record.size = size;
  a.record.site = site;
  a.record.siteLine = line;
  a.record.sizeGlobal = sizeGlobal;
  s.heap[a.record.allocId] = a;
  return a.record.allocId;
}

Value Executor::lookup(const PathState &s, const std::string &name) const {
  const Frame &f = s.top();
  auto it = f.env.find(name);
  if (it != f.env.end())
    return it->second;
  auto g = s.globals.find(name);
  if (g != s.globals.end())
    return g->second;
  throw std::logic_error("undefined variable '" + name + "'");
}

void Executor::assign(PathState &s, const std::string &name, Value v) {
  Frame &f = s.top();
  if (!f.env.count(name) && s.globals.count(name)) {
    s.globals[name] = std::get<Term>(v);
    return;
  }
  f.env[name] = std::move(v);
}

Term Executor::freshInput(PathState &s) {
  std::string name = "nondet_" + std::to_string(s.nondetCount++);
  auto pin = bounds_.pinned.find(name);
  if (pin != bounds_.pinned.end())
    return Term::constant(pin->second);
  Term t = Term::symbol(name);
  if (bounds_.inputRange) {
    s.pc.push_back(Constraint::ge(t, Term::constant(bounds_.inputRange->first)));
    s.pc.push_back(Constraint::le(t, Term::constant(bounds_.inputRange->second)));
  }
  return t;
}

Value Executor::evalValue(PathState &s, const Expr &e, const Constraint &guard) {
  if (e.kind == ExprKind::Var) {
    Value v = lookup(s, e.name);
    if (std::holds_alternative<BufRef>(v))
      return v;
  }
  return evalTerm(s, e, guard);
}

Term Executor::evalTerm(PathState &s, const Expr &e, const Constraint &guard) {
  switch (e.kind) {
  case ExprKind::IntLit:
    return Term::constant(e.value);
  case ExprKind::Var:
    return s.intValue(e.name);
  case ExprKind::SizeOf: {
    BufRef b = std::get<BufRef>(lookup(s, e.name));
    return s.heap.at(b.allocId).record.size;
  }
  case ExprKind::Unary:
    return -evalTerm(s, *e.operands[0], guard);
  case ExprKind::Binary: {
    Term a = evalTerm(s, e.lhs(), guard);
    Term b = evalTerm(s, e.rhs(), guard);
    switch (e.binOp) {
    case BinOp::Add:
      return a + b;
    case BinOp::Sub:
      return a - b;
    case BinOp::Mul:
      return Term::mul(a, b);
    case BinOp::Div:
    case BinOp::Mod: {
      auto it = checks_.find(e.id);
      if (it != checks_.end())
        for (const auto &c : it->second)
          runCheck(s, c, guard, b, Term::constant(0), "");
      return e.binOp == BinOp::Div ? Term::div(a, b) : Term::mod(a, b);
    }
    default:
      throw std::logic_error("boolean operator in integer context");
    }
  }
  case ExprKind::Index: {
    BufRef buf = std::get<BufRef>(lookup(s, e.name));
    Term off = evalTerm(s, *e.operands[0], guard);
    auto it = checks_.find(e.id);
    if (it != checks_.end()) {
      Term size = Term::constant(0);
      std::string sizeGlobal;
      if (buf.allocId >= 0) {
        size = s.heap.at(buf.allocId).record.size;
        sizeGlobal = s.heap.at(buf.allocId).record.sizeGlobal;
      }
      for (const auto &c : it->second)
        runCheck(s, c, guard, off, size, sizeGlobal);
    }
    return readMemory(s, buf.allocId, off);
  }
  case ExprKind::Call:
    if (e.name == "nondet_int")
      return freshInput(s);
    throw std::logic_error("call to '" + e.name + "' inside an expression");
  }
  return Term::constant(0);
}

Constraint Executor::evalCond(PathState &s, const Expr &e,
                              const Constraint &guard) {
  if (e.kind == ExprKind::Unary && e.unOp == UnOp::Not)
    return !evalCond(s, *e.operands[0], guard);
  if (e.kind == ExprKind::Binary) {
    if (e.binOp == BinOp::And) {
      Constraint a = evalCond(s, e.lhs(), guard);
      Constraint b = evalCond(s, e.rhs(), guard && a);
      return a && b;
    }
    if (e.binOp == BinOp::Or) {
      Constraint a = evalCond(s, e.lhs(), guard);
      Constraint b = evalCond(s, e.rhs(), guard && !a);
      return a || b;
    }
    if (isComparison(e.binOp)) {
      Term a = evalTerm(s, e.lhs(), guard);
      Term b = evalTerm(s, e.rhs(), guard);
      switch (e.binOp) {
      case BinOp::Lt:
        return Constraint::lt(a, b);
      case BinOp::Le:
        return Constraint::le(a, b);
      case BinOp::Gt:
        return Constraint::gt(a, b);
      case BinOp::Ge:
        return Constraint::ge(a, b);
      case BinOp::Eq:
        return Constraint::eq(a, b);
      default:
        return Constraint::ne(a, b);
      }
    }
  }
  return Constraint::ne(evalTerm(s, e, guard), Term::constant(0));
}

Term Executor::readMemory(PathState &s, int alloc, const Term &offset) {
  if (alloc < 0)
    return Term::constant(0);
  const auto &writes = s.heap.at(alloc).writes;
  bool concrete = offset.isConstant();
  for (const auto &w : writes)
    concrete = concrete && w.first.isConstant();
  if (concrete) {
    for (auto it = writes.rbegin(); it != writes.rend(); ++it)
      if (it->first.constantPart() == offset.constantPart())
        return it->second;
    return Term::constant(0);
  }
  if (writes.empty())
    return Term::constant(0);
  // Fresh value constrained by a case split over the writes, latest first.
  Term v = Term::symbol("mem_" + std::to_string(s.memCount++));
  std::vector<Constraint> cases;
  std::vector<Constraint> missedLater;
  for (auto it = writes.rbegin(); it != writes.rend(); ++it) {
    std::vector<Constraint> c = missedLater;
    c.push_back(Constraint::eq(offset, it->first));
    c.push_back(Constraint::eq(v, it->second));
    cases.push_back(Constraint::conj(c));
    missedLater.push_back(Constraint::ne(offset, it->first));
  }
  missedLater.push_back(Constraint::eq(v, Term::constant(0)));
  cases.push_back(Constraint::conj(missedLater));
  s.pc.push_back(Constraint::disj(cases));
  return v;
}

bool Executor::feasible(const PathState &s, const Constraint &extra) {
  if (extra.isFalse())
    return false;
  if (extra.isTrue())
    return true;
  // The path condition is satisfiable on its own, so only conjuncts that
  // share symbols with `extra` (transitively) can make it unsat.
  std::set<std::string> syms = extra.freeSymbols();
  std::vector<bool> used(s.pc.size(), false);
  std::vector<Constraint> parts{extra};
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < s.pc.size(); ++i) {
      if (used[i])
        continue;
      auto fs = s.pc[i].freeSymbols();
      bool shares = false;
      for (const auto &x : fs)
        if (syms.count(x)) {
          shares = true;
          break;
        }
      if (!shares)
        continue;
      used[i] = true;
      parts.push_back(s.pc[i]);
      syms.insert(fs.begin(), fs.end());
      grew = true;
    }
  }
  SatResult r = solver_.checkSat(Constraint::conj(parts));
  if (r.verdict == Verdict::Unknown) {
    result_.solverUnknown = true;
    return true;
  }
  return r.verdict == Verdict::Sat;
}

void Executor::runCheck(PathState &s, const SanitizerCheck &c,
                        const Constraint &guard, const Term &operand,
                        const Term &size, const std::string &sizeGlobal) {
  Constraint check = checkConstraint(c.kind, operand, size);
  Constraint bad = guard && !check;
  if (bad.isFalse())
    return;
  Constraint violation = s.pathCondition() && bad;
  SatResult r = solver_.checkSat(violation);
  if (r.verdict == Verdict::Unsat)
    return;
  if (r.verdict == Verdict::Unknown)
    result_.solverUnknown = true;

  auto key = std::make_pair(c.guardedNode, c.kind);
  auto it = reportIndex_.find(key);
  if (it == reportIndex_.end()) {
    CrashReport rep;
    rep.kind = c.kind;
    rep.crashNode = c.guardedNode;
    rep.crashStmt = c.stmt;
    rep.crashLine = c.line;
    rep.function = c.function;
    rep.buffer = c.buffer;
    rep.operand = c.operand;
    it = reportIndex_.emplace(key, result_.reports.size()).first;
    result_.reports.push_back(std::move(rep));
  }
  FailingPath fp;
  fp.pathId = s.pathId;
  fp.pathCondition = s.pathCondition();
  fp.pcConjuncts = s.pc;
  fp.violation = violation;
  fp.witness = r.model;
  fp.confirmed = r.verdict == Verdict::Sat;
  fp.steps = s.steps;
  fp.trace = s.trace;
  fp.crashFrame = s.top().id;
  fp.crashEnv = snapshot(s);
  fp.operand = operand;
  fp.size = size;
  fp.sizeGlobal = sizeGlobal;
  result_.reports[it->second].failingPaths.push_back(std::move(fp));

  // Keep going on the assumption that the check held.
  Constraint held = Constraint::implies(guard, check);
  if (!feasible(s, held)) {
    s.killed = true;
    return;
  }
  if (!held.isTrue())
    s.pc.push_back(held);
}

ExecutionResult execute(const Program &p,
                        const std::vector<SanitizerCheck> &checks,
                        const ExecBounds &bounds) {
  Executor ex(p, checks, bounds);
  return ex.execute();
}

std::string renderCfc(const CrashReport &r, const Program &p) {
  const std::string &v = r.buffer;
  switch (r.kind) {
  case CheckKind::HeapBoundUpper:
    return "access(" + v + ") < base(" + v + ")+size(" + v + ")";
  case CheckKind::HeapBoundLower:
    return "access(" + v + ") >= base(" + v + ")";
  case CheckKind::DivByZero: {
    ProgramIndex idx(p);
    const Expr *d = idx.expr(r.operand);
    return (d ? printExpr(*d) : std::string("divisor")) + " != 0";
  }
  }
  return "";
}

} // namespace symdeffix
