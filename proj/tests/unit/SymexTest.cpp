//===-- SymexTest.cpp -----------------------------------------------------===//

#include "Corpus.h"
#include "Oracle.h"
#include "symdeffix/Printer.h"

#include <gtest/gtest.h>

using namespace symdeffix;
using namespace symdeffix::testing;

namespace {

struct Prepared {
  Program prog;
  std::vector<SanitizerCheck> checks;
};

Prepared prepare(const std::string &source, const std::string &path = "t.c") {
  Prepared p{parse(source, path), {}};
  insertMallocGlobals(p.prog);
  p.checks = insertSanitizerChecks(p.prog, ErrorClasses::all());
  return p;
}

Prepared prepareFile(const std::string &name) {
  Prepared p{parseFile(corpusPath(name)), {}};
  insertMallocGlobals(p.prog);
  p.checks = insertSanitizerChecks(p.prog, ErrorClasses::all());
  return p;
}

TEST(SymexTest, HeapOverflowFlagship) {
  Prepared p = prepareFile("heap_overflow.c");
  ExecutionResult r = execute(p.prog, p.checks);
  ASSERT_EQ(r.reports.size(), 1u);
  const CrashReport &rep = r.reports[0];
  EXPECT_EQ(rep.cfc, "access(buffer) < base(buffer)+size(buffer)");
  EXPECT_EQ(rep.crashLine, 19);
  ASSERT_EQ(rep.trace.size(), 1u);
  EXPECT_EQ(rep.trace[0], (TraceEvent{"IN", "main"}));
  ASSERT_EQ(rep.failingPaths.size(), 1u);
  const FailingPath &fp = rep.failingPaths[0];
  EXPECT_EQ(fp.operand.evaluate(fp.witness), 5);
  EXPECT_EQ(fp.sizeGlobal, "GLOBAL_MS__heap_overflow__malloc_7");
  EXPECT_FALSE(r.boundHit);
}

TEST(SymexTest, SafeProgramHasTwoPaths) {
  Prepared p = prepareFile("safe.c");
  ExecutionResult r = execute(p.prog, p.checks);
  EXPECT_TRUE(r.reports.empty());
  EXPECT_EQ(r.pathsExplored, 2u);
}

TEST(SymexTest, TwoPathOverflowMergesExclusivePaths) {
  Prepared p = prepareFile("two_path_overflow.c");
  ExecutionResult r = execute(p.prog, p.checks);
  ASSERT_EQ(r.reports.size(), 1u);
  const auto &fps = r.reports[0].failingPaths;
  ASSERT_EQ(fps.size(), 2u);
  Solver s;
  EXPECT_EQ(s.checkSat(fps[0].pathCondition && fps[1].pathCondition).verdict,
            Verdict::Unsat);
  EXPECT_LT(fps[0].pathId, fps[1].pathId);

  Program restricted;
  Program original = parseFile(corpusPath("two_path_overflow.c"));
  ExecutionResult rr = runRestricted(original, 0, 7, restricted);
  EXPECT_EQ(symbolicFailures(rr, 2, 0, 7), concreteFailures(original, 0, 7));
}

TEST(SymexTest, CfcRendering) {
  Prepared d = prepare("int main(){ int d = nondet_int(); int y = 10 / d;"
                       " return y; }");
  ExecutionResult r = execute(d.prog, d.checks);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.reports[0].cfc, "d != 0");

  Prepared n = prepareFile("negative_index.c");
  r = execute(n.prog, n.checks);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.reports[0].cfc, "access(b) >= base(b)");
  EXPECT_EQ(r.reports[0].kind, CheckKind::HeapBoundLower);
}

TEST(SymexTest, StepSubstitutes) {
  Prepared p = prepare("int main(){ int x = nondet_int(); int y = x + 1;"
                       " return y; }");
  Executor ex(p.prog, p.checks);
  PathState s = ex.initialState();
  auto next = ex.step(s);
  ASSERT_EQ(next.size(), 1u);
  next = ex.step(next[0]);
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(next[0].intValue("y"),
            Term::symbol("nondet_0") + Term::constant(1));
}

TEST(SymexTest, InfeasibleArmIsPruned) {
  Prepared p = prepare("int main(){ int s = nondet_int(); int r = 0;"
                       " if (s < 0) r = 1; return r; }");
  Executor ex(p.prog, p.checks);
  PathState s = ex.initialState();
  s = ex.step(s).at(0);
  s = ex.step(s).at(0);
  s.pc.push_back(Constraint::ge(Term::symbol("nondet_0"), Term::constant(3)));
  auto next = ex.step(s);
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(next[0].pathId, "1");
}

TEST(SymexTest, SiblingPathConditionsPartitionParent) {
  Prepared p = prepare("int main(){ int a = nondet_int(); int b = nondet_int();"
                       " int r = 0; if (a + 2 * b < 5 && a != b) r = 1;"
                       " return r; }");
  Executor ex(p.prog, p.checks);
  PathState s = ex.initialState();
  for (int i = 0; i < 3; ++i)
    s = ex.step(s).at(0);
  auto kids = ex.step(s);
  ASSERT_EQ(kids.size(), 2u);
  Solver solver;
  Constraint parent = s.pathCondition();
  Constraint a = kids[0].pathCondition(), b = kids[1].pathCondition();
  EXPECT_EQ(solver.checkSat(a && b).verdict, Verdict::Unsat);
  EXPECT_EQ(solver.checkValid(Constraint::implies(parent, a || b)).verdict,
            Validity::Valid);
  EXPECT_EQ(solver.checkValid(Constraint::implies(a || b, parent)).verdict,
            Validity::Valid);
}

TEST(SymexTest, LoopStopsAtUnrollBound) {
  Prepared p = prepare("int main(){ char a[200]; int i = 0; int hits = 0;"
                       " for (i = 0; i < 100; i++) { hits = hits + 1; }"
                       " return hits; }");
  ExecBounds b;
  b.unroll = 4;
  Executor ex(p.prog, p.checks, b);
  PathState s = ex.initialState();
  int bodyVisits = 0;
  NodeId bodyStmt = kNoNode;
  {
    ProgramIndex idx(p.prog);
    for (NodeId id : idx.allIds())
      if (const Stmt *st = idx.stmt(id))
        if (st->kind == StmtKind::Assign && st->name == "hits")
          bodyStmt = st->id;
  }
  for (;;) {
    auto next = ex.step(s);
    ASSERT_LE(next.size(), 1u);
    if (next.empty())
      break;
    s = next[0];
    if (s.finished)
      break;
  }
  for (const auto &r : s.steps)
    if (r.node == bodyStmt && r.kind == StepRecord::Kind::Stmt)
      ++bodyVisits;
  EXPECT_EQ(bodyVisits, 4);
  EXPECT_TRUE(s.boundHit);
  EXPECT_EQ(s.returnValue->constantPart(), 4);
}

TEST(SymexTest, WitnessesReplayConcretely) {
  for (const auto &f : corpusFiles()) {
    Program original = parseFile(f);
    Prepared p{original, {}};
    insertMallocGlobals(p.prog);
    p.checks = insertSanitizerChecks(p.prog, ErrorClasses::all());
    ExecutionResult r = execute(p.prog, p.checks);
    size_t arity = countNondetCalls(original);
    for (const auto &rep : r.reports)
      for (const auto &fp : rep.failingPaths) {
        ASSERT_TRUE(fp.confirmed) << f;
        EXPECT_TRUE(fp.violation.evaluate(fp.witness)) << f;
        std::vector<int64_t> in;
        for (size_t i = 0; i < arity; ++i) {
          auto it = fp.witness.find("nondet_" + std::to_string(i));
          in.push_back(it == fp.witness.end() ? 0 : it->second);
        }
        ConcreteRun run = Interpreter(p.prog, in).run();
        ASSERT_TRUE(run.crash.has_value()) << f << " path " << fp.pathId;
        EXPECT_EQ(run.crash->line, rep.crashLine) << f;
        EXPECT_EQ(run.crash->node, rep.crashNode) << f;
      }
  }
}

TEST(SymexTest, OracleEquivalenceOnCorpus) {
  for (const auto &f : corpusFiles()) {
    Program original = parseFile(f);
    size_t arity = countNondetCalls(original);
    if (arity > 2)
      continue;
    Program inst;
    ExecutionResult r = runRestricted(original, 0, 7, inst);
    EXPECT_EQ(symbolicFailures(r, arity, 0, 7), concreteFailures(original, 0, 7))
        << f;
  }
}

TEST(SymexTest, InstrumentationPreservesResults) {
  for (const auto &f : corpusFiles()) {
    Program original = parseFile(f);
    Program inst = original;
    insertMallocGlobals(inst);
    forEachInput(countNondetCalls(original), 0, 7,
                 [&](const std::vector<int64_t> &v) {
                   ConcreteRun a = Interpreter(original, v).run();
                   ConcreteRun b = Interpreter(inst, v).run();
                   EXPECT_EQ(a.crash.has_value(), b.crash.has_value()) << f;
                   if (!a.crash && !b.crash)
                     EXPECT_EQ(a.returned, b.returned) << f;
                 });
  }
}

std::string summarize(const ExecutionResult &r) {
  std::string out = std::to_string(r.pathsExplored) + (r.boundHit ? "B" : "") + "\n";
  for (const auto &rep : r.reports) {
    out += rep.cfc + " " + std::to_string(rep.crashLine) + "\n";
    for (const auto &fp : rep.failingPaths) {
      out += fp.pathId + " " + fp.violation.str() + "\n";
      for (const auto &[k, v] : fp.witness)
        out += k + "=" + std::to_string(v) + " ";
      out += "\n";
    }
  }
  return out;
}

TEST(SymexTest, RunsAreDeterministic) {
  for (const auto &f : corpusFiles()) {
    Prepared a{parseFile(f), {}}, b{parseFile(f), {}};
    for (Prepared *p : {&a, &b}) {
      insertMallocGlobals(p->prog);
      p->checks = insertSanitizerChecks(p->prog, ErrorClasses::all());
    }
    EXPECT_EQ(summarize(execute(a.prog, a.checks)),
              summarize(execute(b.prog, b.checks)))
        << f;
  }
}

TEST(SymexTest, CallsTraceAndFrames) {
  Prepared p = prepareFile("call_overflow.c");
  ExecutionResult r = execute(p.prog, p.checks);
  ASSERT_GE(r.reports.size(), 1u);
  const CrashReport &rep = r.reports[0];
  EXPECT_EQ(rep.function, "store");
  EXPECT_EQ(rep.cfc, "access(b) < base(b)+size(b)");
  std::vector<TraceEvent> expect = {{"IN", "main"}, {"IN", "store"}};
  EXPECT_EQ(rep.trace, expect);
}

TEST(SymexTest, PathCapSetsBoundHit) {
  Prepared p = prepare("int main(){ int i = 0; int n = nondet_int(); int r = 0;"
                       " while (i < n) { if (nondet_int() > 0) r = r + 1;"
                       " i = i + 1; } return r; }");
  ExecBounds b;
  b.maxPaths = 5;
  b.unroll = 3;
  ExecutionResult r = execute(p.prog, p.checks, b);
  EXPECT_TRUE(r.boundHit);
  EXPECT_EQ(r.pathsExplored, 5u);
}

} // namespace
