//===-- RandomStraightLine.h - Straight-line programs and a runner --------===//
//
// Test-only. Generates up to five linear assignments over three variables
// plus a final comparison, renders them as Mini-C source and executes them
// directly on int64 vectors.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_TESTS_RANDOMSTRAIGHTLINE_H
#define SYMDEFFIX_TESTS_RANDOMSTRAIGHTLINE_H

#include "RandomFormula.h"

#include <functional>
#include <sstream>

namespace symdeffix::testing {

struct RawAssign {
  int target = 0;
  std::array<int64_t, 3> coeff{};
  int64_t constant = 0;
};

struct StraightLine {
  int vars = 1;
  std::vector<RawAssign> body;
  RawAtom post;

  std::array<int64_t, 3> run(std::array<int64_t, 3> x) const {
    for (const auto &a : body) {
      int64_t v = a.constant;
      for (int i = 0; i < 3; ++i)
        v += a.coeff[i] * x[i];
      x[a.target] = v;
    }
    return x;
  }

  static std::string name(int i) { return "x" + std::to_string(i); }

  static std::string linear(const std::array<int64_t, 3> &c, int64_t k) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < 3; ++i) {
      if (!c[i])
        continue;
      if (!first)
        os << " + ";
      os << c[i] << " * " << name(i);
      first = false;
    }
    if (!first)
      os << " + ";
    os << k;
    return os.str();
  }

  /// `int main() { int x0 = nondet_int(); ... <body> return 0; }`
  std::string source() const {
    std::ostringstream os;
    os << "int main() {\n";
    for (int i = 0; i < 3; ++i)
      os << "  int " << name(i) << " = nondet_int();\n";
    for (const auto &a : body)
      os << "  " << name(a.target) << " = " << linear(a.coeff, a.constant)
         << ";\n";
    os << "  return 0;\n}\n";
    return os.str();
  }

  /// The postcondition over symbols x0..x2, in s-expression syntax.
  std::string postSexpr() const {
    static const char *ops[] = {"<", "<=", ">", ">=", "=", "distinct"};
    std::string t = "(+";
    for (int i = 0; i < 3; ++i)
      if (post.coeff[i] != 0)
        t += " (* " + std::to_string(post.coeff[i]) + " " + name(i) + ")";
    t += " " + std::to_string(post.constant) + ")";
    return std::string("(") + ops[post.op] + " " + t + " 0)";
  }
};

inline StraightLine randomStraightLine(std::mt19937 &rng) {
  StraightLine s;
  s.vars = int(uniform(rng, 1, 3));
  int n = int(uniform(rng, 0, 5));
  for (int k = 0; k < n; ++k) {
    RawAssign a;
    a.target = int(uniform(rng, 0, s.vars - 1));
    for (int i = 0; i < s.vars; ++i)
      a.coeff[i] = uniform(rng, -3, 3);
    a.constant = uniform(rng, -4, 4);
    s.body.push_back(a);
  }
  for (int i = 0; i < s.vars; ++i)
    s.post.coeff[i] = uniform(rng, -3, 3);
  s.post.constant = uniform(rng, -4, 4);
  s.post.op = int(uniform(rng, 0, 5));
  return s;
}

/// Calls `fn` for every vector of `s.vars` values in [lo, hi] (unused
/// variables stay 0).
inline void forEachState(int vars, int64_t lo, int64_t hi,
                         const std::function<void(const std::array<int64_t, 3> &)> &fn) {
  std::array<int64_t, 3> x{};
  std::function<void(int)> rec = [&](int i) {
    if (i == vars) {
      fn(x);
      return;
    }
    for (int64_t v = lo; v <= hi; ++v) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

} // namespace symdeffix::testing

#endif
