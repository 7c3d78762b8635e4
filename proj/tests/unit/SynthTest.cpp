//===-- SynthTest.cpp -----------------------------------------------------===//

#include "Corpus.h"
#include "symdeffix/Parser.h"
#include "symdeffix/Printer.h"
#include "symdeffix/Synth.h"

#include <gtest/gtest.h>

using namespace symdeffix;
using namespace symdeffix::testing;

namespace {

bool equivalent(const Constraint &a, const Constraint &b) {
  Solver s;
  return s.checkValid(Constraint::implies(a, b)).verdict == Validity::Valid &&
         s.checkValid(Constraint::implies(b, a)).verdict == Validity::Valid;
}

struct Flagship {
  Program prog;
  ExecutionResult result;
  std::vector<FixLocation> locs;
};

Flagship flagship() {
  Flagship f{parseFile(corpusPath("heap_overflow.c")), {}, {}};
  insertMallocGlobals(f.prog);
  f.result = execute(f.prog, insertSanitizerChecks(f.prog, ErrorClasses::all()));
  Executor ex(f.prog, {});
  f.locs = findFixLocations(f.prog, ex.cfgOf("main"), f.result.reports.at(0));
  return f;
}

const Stmt *loopOf(const Program &p) {
  ProgramIndex idx(p);
  for (NodeId id : idx.allIds())
    if (const Stmt *s = idx.stmt(id))
      if (s->kind == StmtKind::For || s->kind == StmtKind::While)
        return s;
  return nullptr;
}

TEST(SynthTest, FlagshipGuardStrengthened) {
  Flagship f = flagship();
  auto pc = propagate(f.prog, f.result.reports[0], f.locs[0], RepairMode::AllPaths);
  ASSERT_TRUE(pc);
  SynthResult r = synthesize(f.prog, *pc);
  ASSERT_EQ(r.verdict, SynthVerdict::Found);
  ASSERT_FALSE(r.patches.empty());
  Patch best = r.patches[0];
  EXPECT_EQ(best.tmpl, PatchTemplate::GuardStrengthen);
  EXPECT_EQ(best.size, 3u);
  EXPECT_EQ(printExpr(*best.expr), "i < GLOBAL_MS__heap_overflow__malloc_7");

  Program patched = applyPatch(f.prog, best);
  const Stmt *loop = loopOf(patched);
  LeafFn leaf = programVarLeaf(patched, patched.functions[0]);
  EXPECT_TRUE(equivalent(
      lowerCond(*loop->cond, leaf),
      parseConstraint("(and (< i 10) (< i GLOBAL_MS__heap_overflow__malloc_7))")));
  EXPECT_NE(best.diff.find("-  for (i; i < sizeof(content); i++) {"),
            std::string::npos)
      << best.diff;
  EXPECT_NE(best.diff.find("+  for (i; i < sizeof(content) && i < "
                           "GLOBAL_MS__heap_overflow__malloc_7; i++) {"),
            std::string::npos)
      << best.diff;
  EXPECT_EQ(best.diff.rfind("--- a/heap_overflow.c\n+++ b/heap_overflow.c\n@@ ", 0), 0u);
  // The patched program still parses.
  EXPECT_NO_THROW(parse(printProgram(patched)));
}

PropagatedConstraint manual(const Program &p, const std::string &formula) {
  PropagatedConstraint pc;
  pc.at.node = loopOf(p)->id;
  pc.at.kind = FixKind::LoopGuard;
  pc.at.function = "main";
  pc.at.scopeVars = {"i", "G", "n"};
  pc.formula = parseConstraint(formula);
  pc.perPath.push_back({"0", pc.formula, true});
  pc.visits.push_back({"0", Constraint::top(),
                       {{"i", Term::constant(0)}, {"G", Term::symbol("g")},
                        {"n", Term::symbol("m")}},
                       true});
  return pc;
}

const char *kLoop = "int main() { int G = nondet_int(); int n = nondet_int();"
                    " int i = 0; while (i < n) { i = i + 1; } return 0; }";

TEST(SynthTest, SmallestConjunctComesFirst) {
  Program p = parse(kLoop);
  SynthResult r = synthesize(p, manual(p, "(< i G)"));
  ASSERT_FALSE(r.patches.empty());
  EXPECT_EQ(r.patches[0].tmpl, PatchTemplate::GuardStrengthen);
  EXPECT_EQ(printExpr(*r.patches[0].expr), "i < G");
  for (size_t k = 1; k < r.patches.size(); ++k)
    EXPECT_GE(r.patches[k].size, r.patches[k - 1].size);
}

TEST(SynthTest, ExistingGuardAlreadySafe) {
  Program p = parse(kLoop);
  SynthResult r = synthesize(p, manual(p, "(< i n)"));
  EXPECT_EQ(r.verdict, SynthVerdict::AlreadySafe);
  EXPECT_TRUE(r.patches.empty());
}

TEST(SynthTest, EnumerationIsDeterministic) {
  Program p = parse(kLoop);
  auto pc = manual(p, "(and (< (+ i 1) G) (<= 0 i))");
  SynthResult a = synthesize(p, pc), b = synthesize(p, pc);
  ASSERT_EQ(a.patches.size(), b.patches.size());
  EXPECT_EQ(a.candidates, b.candidates);
  for (size_t k = 0; k < a.patches.size(); ++k)
    EXPECT_EQ(printExpr(*a.patches[k].expr), printExpr(*b.patches[k].expr));
}

TEST(SynthTest, AcceptedGuardsAreSatisfiableSomewhere) {
  Program p = parse(kLoop);
  auto pc = manual(p, "(< (+ i 2) G)");
  SynthResult r = synthesize(p, pc);
  Solver s;
  LeafFn leaf = programVarLeaf(p, p.functions[0]);
  for (const auto &patch : r.patches) {
    Constraint e = lowerCond(*patch.expr, leaf);
    if (patch.tmpl == PatchTemplate::GuardStrengthen)
      e = parseConstraint("(< i n)") && e;
    EXPECT_NE(s.checkSat(e.substitute(pc.visits[0].env)).verdict, Verdict::Unsat)
        << printExpr(*patch.expr);
  }
}

TEST(SynthTest, ConstantsAreHarvested) {
  Program p = parse("int main() { int x = 7; buf b = malloc(3); if (x < -2) x = 4;"
                    " return x; }");
  insertMallocGlobals(p);
  EXPECT_EQ(harvestConstants(p), (std::vector<int64_t>{-2, 0, 1, 4, 7}));
}

TEST(SynthTest, IdentityPatchHasEmptyDiff) {
  Program p = parse(kLoop);
  Patch patch;
  patch.loc.node = loopOf(p)->id;
  patch.tmpl = PatchTemplate::GuardReplace;
  patch.expr = std::shared_ptr<const Expr>(loopOf(p)->cond->clone());
  Program q = applyPatch(p, patch);
  EXPECT_EQ(patch.diff, "");
  EXPECT_EQ(printProgram(p), printProgram(q));
}

TEST(SynthTest, MissingNodeThrows) {
  Program p = parse(kLoop);
  Patch patch;
  patch.loc.node = 9999;
  patch.expr = std::shared_ptr<const Expr>(loopOf(p)->cond->clone());
  EXPECT_THROW(applyPatch(p, patch), NodeNotFound);
}

TEST(SynthTest, GuardInsertWrapsStatement) {
  Program p = parse("int main() {\n  int d = nondet_int();\n  int y = 0;\n"
                    "  y = 10 / d;\n  return y;\n}\n");
  insertMallocGlobals(p);
  ExecutionResult r = execute(p, insertSanitizerChecks(p, ErrorClasses::all()));
  ASSERT_EQ(r.reports.size(), 1u);
  Executor ex(p, {});
  auto locs = findFixLocations(p, ex.cfgOf("main"), r.reports[0]);
  ASSERT_EQ(locs.back().kind, FixKind::InsertBefore);
  auto pc = propagate(p, r.reports[0], locs.back(), RepairMode::AllPaths);
  SynthResult s = synthesize(p, *pc);
  ASSERT_FALSE(s.patches.empty());
  EXPECT_EQ(printExpr(*s.patches[0].expr), "d != 0");
  Patch best = s.patches[0];
  Program q = applyPatch(p, best);
  EXPECT_NE(printProgram(q).find("if (d != 0)"), std::string::npos) << printProgram(q);
  ExecutionResult again = execute(q, insertSanitizerChecks(q, ErrorClasses::all()));
  EXPECT_TRUE(again.reports.empty());
}

TEST(DiffTest, HunksAndContext) {
  std::string a, b;
  for (int i = 1; i <= 20; ++i) {
    a += "l" + std::to_string(i) + "\n";
    b += (i == 10 ? std::string("changed") : "l" + std::to_string(i)) + "\n";
  }
  EXPECT_EQ(unifiedDiff(a, b, "f.c"),
            "--- a/f.c\n+++ b/f.c\n@@ -7,7 +7,7 @@\n l7\n l8\n l9\n-l10\n"
            "+changed\n l11\n l12\n l13\n");
  EXPECT_EQ(unifiedDiff(a, a, "f.c"), "");
  EXPECT_EQ(unifiedDiff("x\n", "x\ny\n", "f.c"),
            "--- a/f.c\n+++ b/f.c\n@@ -1 +1,2 @@\n x\n+y\n");
}

} // namespace
