//===-- Benchmarks.cpp - Stage and end-to-end timings ---------------------===//

#include "symdeffix/Parser.h"
#include "symdeffix/Repair.h"

#include <benchmark/benchmark.h>

#include <random>

using namespace symdeffix;

namespace {

std::string corpus(const char *name) {
  return std::string(SYMDEFFIX_CORPUS_DIR) + "/" + name;
}

void BM_Parse(benchmark::State &st) {
  std::string path = corpus("call_overflow.c");
  for (auto _ : st)
    benchmark::DoNotOptimize(parseFile(path));
}
BENCHMARK(BM_Parse);

// Random conjunctions of three atoms over three symbols.
void BM_SolverConjunction(benchmark::State &st) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coeff(-4, 4), cst(-10, 10);
  std::vector<Constraint> cs;
  for (int i = 0; i < 64; ++i) {
    std::vector<Constraint> atoms;
    for (int k = 0; k < 3; ++k) {
      Term t = Term::constant(cst(rng));
      for (const char *s : {"x", "y", "z"})
        t = t + Term::symbol(s).scaled(coeff(rng));
      atoms.push_back(Constraint::le(t, Term::constant(0)));
    }
    cs.push_back(Constraint::conj(atoms));
  }
  Solver solver;
  size_t i = 0;
  for (auto _ : st)
    benchmark::DoNotOptimize(solver.checkSat(cs[i++ % cs.size()]));
}
BENCHMARK(BM_SolverConjunction);

void BM_Detect(benchmark::State &st, const char *file, unsigned unroll) {
  Instrumented in = instrument(parseFile(corpus(file)), ErrorClasses::all());
  ExecBounds b;
  b.unroll = unroll;
  for (auto _ : st)
    benchmark::DoNotOptimize(detect(in, b));
}
BENCHMARK_CAPTURE(BM_Detect, heap_overflow, "heap_overflow.c", 64);
BENCHMARK_CAPTURE(BM_Detect, loop_nondet_u8, "loop_overflow_nondet.c", 8);
BENCHMARK_CAPTURE(BM_Detect, loop_nondet_u64, "loop_overflow_nondet.c", 64);

void BM_Repair(benchmark::State &st, const char *file) {
  RepairOptions o;
  o.writeArtifacts = false;
  std::string path = corpus(file);
  Program p = parseFile(path);
  for (auto _ : st)
    benchmark::DoNotOptimize(repairProgram(p, path, o));
}
BENCHMARK_CAPTURE(BM_Repair, heap_overflow, "heap_overflow.c")
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Repair, two_path_overflow, "two_path_overflow.c")
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Repair, straight_line, "straight_line.c")
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
