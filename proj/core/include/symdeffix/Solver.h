//===-- Solver.h - Linear integer arithmetic decision procedure -*- C++ -*-===//
//
// DNF expansion followed, per disjunct, by a depth-first search that fixes
// one variable at a time. Each variable's candidate range comes from
// Fourier-Motzkin projection with integer tightening; when projection blows
// past its budget, or a range is unbounded, the search falls back to a
// bounded window around zero.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_SOLVER_H
#define SYMDEFFIX_SOLVER_H

#include "symdeffix/Constraint.h"

#include <chrono>
#include <string>

namespace symdeffix {

struct SolverOptions {
  std::chrono::milliseconds timeout{2000};
  int64_t fallbackRange = int64_t(1) << 16;
  size_t maxDisjuncts = size_t(1) << 14;
  size_t projectionBudget = 4000;
};

enum class Verdict { Sat, Unsat, Unknown };
enum class Validity { Valid, Invalid, Unknown };

struct SatResult {
  Verdict verdict = Verdict::Unknown;
  Model model;        // set when Sat; covers every free symbol
  std::string reason; // set when Unknown
};

struct ValidityResult {
  Validity verdict = Validity::Unknown;
  Model counterModel; // set when Invalid
  std::string reason;
};

const char *toString(Verdict v);
const char *toString(Validity v);

class Solver {
public:
  explicit Solver(SolverOptions opts = {}) : opts_(opts) {}

  /// Exact when `c` has no opaque terms. Every returned model has been
  /// re-evaluated against `c`.
  SatResult checkSat(const Constraint &c) const;
  ValidityResult checkValid(const Constraint &c) const;

  const SolverOptions &options() const { return opts_; }

private:
  SolverOptions opts_;
};

inline Constraint substitute(const Constraint &c, const std::string &var,
                             const Term &t) {
  return c.substitute(var, t);
}

} // namespace symdeffix

#endif
