//===-- InstrumentTest.cpp ------------------------------------------------===//

#include "Corpus.h"
#include "symdeffix/Instrument.h"
#include "symdeffix/Parser.h"
#include "symdeffix/Printer.h"

#include <gtest/gtest.h>

#include <filesystem>

using namespace symdeffix;
using symdeffix::testing::corpusFiles;
using symdeffix::testing::corpusPath;

namespace {

TEST(InstrumentTest, HeapOverflowGlobal) {
  Program p = parseFile(corpusPath("heap_overflow.c"));
  auto globals = insertMallocGlobals(p);
  ASSERT_EQ(globals.size(), 1u);
  EXPECT_EQ(globals[0].name, "GLOBAL_MS__heap_overflow__malloc_7");
  EXPECT_EQ(globals[0].siteLine, 7);
  ASSERT_NE(p.findGlobal(globals[0].name), nullptr);

  // `G = 5;` sits right before `buffer = malloc(G);`
  const auto &body = p.findFunction("main")->body->stmts;
  size_t k = 0;
  while (k < body.size() && !body[k]->synthetic)
    ++k;
  ASSERT_LT(k + 1, body.size());
  EXPECT_EQ(body[k]->name, globals[0].name);
  EXPECT_EQ(printExpr(*body[k]->value), "5");
  EXPECT_EQ(printExpr(*body[k + 1]->value),
            "malloc(GLOBAL_MS__heap_overflow__malloc_7)");

  Program again = parse(printProgram(p), p.sourcePath);
  EXPECT_TRUE(structurallyEqual(p, again));

  auto checks = insertSanitizerChecks(p, ErrorClasses::all());
  ASSERT_EQ(checks.size(), 2u);
  EXPECT_EQ(checks[0].kind, CheckKind::HeapBoundUpper);
  EXPECT_EQ(checks[1].kind, CheckKind::HeapBoundLower);
  EXPECT_EQ(checks[0].line, 19);
  EXPECT_EQ(checks[0].buffer, "buffer");
}

TEST(InstrumentTest, IsIdempotent) {
  Program p = parseFile(corpusPath("heap_overflow.c"));
  insertMallocGlobals(p);
  std::string once = printProgram(p);
  insertMallocGlobals(p);
  EXPECT_EQ(printProgram(p), once);
}

TEST(InstrumentTest, NoMallocsLeavesProgramAlone) {
  Program p = parseFile(corpusPath("safe.c"));
  Program q = p;
  EXPECT_TRUE(insertMallocGlobals(p).empty());
  EXPECT_TRUE(structurallyEqual(p, q));
  EXPECT_EQ(printProgram(p), printProgram(q));
}

TEST(InstrumentTest, TwoMallocsOnOneLineAreNumbered) {
  Program p = parseFile(corpusPath("two_mallocs_one_line.c"));
  auto globals = insertMallocGlobals(p);
  ASSERT_EQ(globals.size(), 2u);
  EXPECT_EQ(globals[0].name, "GLOBAL_MS__two_mallocs_one_line__malloc_7_0");
  EXPECT_EQ(globals[1].name, "GLOBAL_MS__two_mallocs_one_line__malloc_7_1");
  Program again = parse(printProgram(p), p.sourcePath);
  EXPECT_NE(again.findGlobal(globals[0].name), nullptr);
  EXPECT_NE(again.findGlobal(globals[1].name), nullptr);
}

TEST(InstrumentTest, MallocUnderUnbracedIfGetsABlock) {
  Program p = parse("int main(){ int c = nondet_int(); buf b;"
                    " if (c) b = malloc(3); else b = malloc(4); return 0; }",
                    "dir/x-y.c");
  auto globals = insertMallocGlobals(p);
  ASSERT_EQ(globals.size(), 2u);
  EXPECT_EQ(globals[0].name, "GLOBAL_MS__x_y__malloc_1_0");
  Program again = parse(printProgram(p), "x.c");
  EXPECT_TRUE(structurallyEqual(p, again));
}

TEST(InstrumentTest, DivisionCheck) {
  Program p = parse("int main(){ int y = 10 / nondet_int(); return y; }", "a.c");
  insertMallocGlobals(p);
  auto checks = insertSanitizerChecks(p, ErrorClasses::all());
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_EQ(checks[0].kind, CheckKind::DivByZero);
  EXPECT_EQ(checks[0].check.kind(), Constraint::Kind::Atom);
  EXPECT_EQ(checks[0].check.atomRel(), Rel::Ne);
  EXPECT_TRUE(insertSanitizerChecks(p, ErrorClasses::none()).empty());
  EXPECT_TRUE(
      insertSanitizerChecks(p, ErrorClasses::parse("heap-overflow")).empty());
}

TEST(InstrumentTest, CheckCountFormulaHoldsOnCorpus) {
  for (const auto &f : corpusFiles()) {
    Program p = parseFile(f);
    insertMallocGlobals(p);
    ProgramIndex idx(p);
    size_t index = 0, div = 0;
    for (NodeId id : idx.allIds()) {
      if (const Stmt *s = idx.stmt(id))
        index += s->isStore() ? 1 : 0;
      if (const Expr *e = idx.expr(id)) {
        index += e->kind == ExprKind::Index ? 1 : 0;
        div += e->kind == ExprKind::Binary &&
                       (e->binOp == BinOp::Div || e->binOp == BinOp::Mod)
                   ? 1
                   : 0;
      }
    }
    EXPECT_EQ(insertSanitizerChecks(p, ErrorClasses::all()).size(),
              index * 2 + div)
        << f;
    EXPECT_EQ(insertSanitizerChecks(p, ErrorClasses::parse("heap-overflow"))
                  .size(),
              index * 2)
        << f;
    EXPECT_NO_THROW(parse(printProgram(p), f)) << f;
  }
}

TEST(InstrumentTest, WritesUnderOutDir) {
  Program p = parseFile(corpusPath("heap_overflow.c"));
  insertMallocGlobals(p);
  auto dir = std::filesystem::temp_directory_path() / "symdeffix_instr_test";
  std::string path = writeInstrumented(p, dir.string());
  EXPECT_EQ(std::filesystem::path(path).filename(), "instrumented.c");
  EXPECT_NO_THROW(parseFile(path));
  std::filesystem::remove_all(dir);
}

} // namespace
