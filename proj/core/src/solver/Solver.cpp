//===-- Solver.cpp --------------------------------------------------------===//

#include "symdeffix/Solver.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <memory>
#include <optional>
#include <stdexcept>

namespace symdeffix {

const char *toString(Verdict v) {
  switch (v) {
  case Verdict::Sat:
    return "sat";
  case Verdict::Unsat:
    return "unsat";
  default:
    return "unknown";
  }
}

const char *toString(Validity v) {
  switch (v) {
  case Validity::Valid:
    return "valid";
  case Validity::Invalid:
    return "invalid";
  default:
    return "unknown";
  }
}

namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max();

/// sum(a[i] * x[i]) + c <= 0 over a fixed variable numbering.
struct Ineq {
  std::vector<int64_t> a;
  int64_t c = 0;

  bool operator<(const Ineq &o) const {
    return a != o.a ? a < o.a : c < o.c;
  }
  bool operator==(const Ineq &o) const { return a == o.a && c == o.c; }
};

/// Tightens by the coefficient gcd. Returns false for a ground
/// contradiction; ground tautologies come back with all-zero coefficients.
bool normalize(Ineq &q) {
  int64_t g = 0;
  for (int64_t v : q.a)
    g = std::gcd(g, v < 0 ? -v : v);
  if (g == 0)
    return q.c <= 0;
  if (g > 1) {
    for (auto &v : q.a)
      v /= g;
    q.c = ceilDiv(q.c, g);
  }
  return true;
}

bool isGround(const Ineq &q) {
  return std::all_of(q.a.begin(), q.a.end(), [](int64_t v) { return v == 0; });
}

struct Unknown {
  std::string reason;
};

/// Exact integer elimination of equalities (Pugh's mod-hat step). Each
/// eliminated variable is recorded as an affine row over the others so the
/// model can be rebuilt back to front. New variables are appended.
class EqualitySolver {
public:
  struct Subst {
    size_t var;
    Ineq value; // var = sum(a[i] * x[i]) + c
  };

  /// Returns false when the equalities have no integer solution.
  bool run(std::vector<Ineq> &eqs, std::vector<Ineq> &ineqs, size_t &nvars) {
    while (!eqs.empty()) {
      Ineq e = eqs.back();
      int64_t g = 0;
      for (int64_t v : e.a)
        g = std::gcd(g, v < 0 ? -v : v);
      if (g == 0) {
        if (e.c != 0)
          return false;
        eqs.pop_back();
        continue;
      }
      if (e.c % g != 0)
        return false;
      for (auto &v : e.a)
        v /= g;
      e.c /= g;
      eqs.back() = e;

      size_t k = e.a.size();
      for (size_t i = 0; i < e.a.size(); ++i)
        if (e.a[i] == 1 || e.a[i] == -1) {
          k = i;
          break;
        }
      Ineq value;
      if (k < e.a.size()) {
        // x_k = -a_k * (c + sum_{i != k} a_i x_i)
        int64_t ak = e.a[k];
        value.a.assign(nvars, 0);
        for (size_t i = 0; i < nvars; ++i)
          if (i != k)
            value.a[i] = -ak * e.a[i];
        value.c = -ak * e.c;
      } else {
        for (size_t i = 0; i < e.a.size(); ++i)
          if (e.a[i] != 0 &&
              (k == e.a.size() || std::abs(e.a[i]) < std::abs(e.a[k])))
            k = i;
        int64_t m = std::abs(e.a[k]) + 1;
        size_t sigma = nvars++;
        for (auto *rows : {&eqs, &ineqs})
          for (auto &q : *rows)
            q.a.push_back(0);
        for (auto &sb : substs_)
          sb.value.a.push_back(0);
        e = eqs.back();
        // m*sigma = sum modhat(a_i) x_i + modhat(c), modhat(a_k) = -sign(a_k)
        int64_t sk = e.a[k] > 0 ? 1 : -1;
        value.a.assign(nvars, 0);
        for (size_t i = 0; i < nvars; ++i)
          if (i != k && i != sigma)
            value.a[i] = sk * modHat(e.a[i], m);
        value.a[sigma] = checkedMul(-sk, m);
        value.c = sk * modHat(e.c, m);
      }
      for (auto *rows : {&eqs, &ineqs})
        for (auto &q : *rows)
          substitute(q, k, value);
      substs_.push_back({k, value});
    }
    return true;
  }

  void rebuild(std::vector<int64_t> &values) const {
    for (auto it = substs_.rbegin(); it != substs_.rend(); ++it) {
      int64_t v = it->value.c;
      for (size_t i = 0; i < it->value.a.size(); ++i)
        v = checkedAdd(v, checkedMul(it->value.a[i], values[i]));
      values[it->var] = v;
    }
  }

private:
  static int64_t modHat(int64_t a, int64_t m) {
    return a - m * floorDiv(2 * a + m, 2 * m);
  }

  static void substitute(Ineq &q, size_t k, const Ineq &value) {
    int64_t f = q.a[k];
    if (f == 0)
      return;
    q.a[k] = 0;
    for (size_t i = 0; i < q.a.size(); ++i)
      q.a[i] = checkedAdd(q.a[i], checkedMul(f, value.a[i]));
    q.c = checkedAdd(q.c, checkedMul(f, value.c));
  }

  std::vector<Subst> substs_;
};

using Disjunct = std::vector<std::pair<Term, Rel>>;

void toDnf(const Constraint &c, std::vector<Disjunct> &out, size_t cap) {
  switch (c.kind()) {
  case Constraint::Kind::True:
    out.push_back({});
    return;
  case Constraint::Kind::False:
    return;
  case Constraint::Kind::Atom:
    if (c.atomRel() == Rel::Ne) {
      // t != 0  <=>  t + 1 <= 0  or  -t + 1 <= 0
      out.push_back({{c.atomTerm() + Term::constant(1), Rel::Le}});
      out.push_back({{-c.atomTerm() + Term::constant(1), Rel::Le}});
    } else {
      out.push_back({{c.atomTerm(), c.atomRel()}});
    }
    return;
  case Constraint::Kind::Or:
    for (const auto &k : c.children()) {
      toDnf(k, out, cap);
      if (out.size() > cap)
        throw Unknown{"disjunct budget exceeded"};
    }
    return;
  case Constraint::Kind::And: {
    std::vector<Disjunct> acc{{}};
    for (const auto &k : c.children()) {
      std::vector<Disjunct> kd;
      toDnf(k, kd, cap);
      std::vector<Disjunct> next;
      for (const auto &l : acc)
        for (const auto &r : kd) {
          Disjunct d = l;
          d.insert(d.end(), r.begin(), r.end());
          next.push_back(std::move(d));
          if (next.size() > cap)
            throw Unknown{"disjunct budget exceeded"};
        }
      acc = std::move(next);
      if (acc.empty())
        return;
    }
    out.insert(out.end(), acc.begin(), acc.end());
    if (out.size() > cap)
      throw Unknown{"disjunct budget exceeded"};
    return;
  }
  }
}

class ConjunctionSearch {
public:
  ConjunctionSearch(std::vector<std::string> vars,
                    std::vector<std::shared_ptr<const OpaqueDef>> defs,
                    const SolverOptions &opts,
                    std::chrono::steady_clock::time_point deadline)
      : vars_(std::move(vars)), defs_(std::move(defs)), opts_(opts),
        deadline_(deadline) {}

  /// Returns a model over vars_ or nullopt when no integer solution exists
  /// (within the fallback window when `incomplete_` is set).
  std::optional<std::vector<int64_t>> solve(std::vector<Ineq> qs) {
    std::vector<int64_t> values(vars_.size(), 0);
    std::vector<bool> assigned(vars_.size(), false);
    if (search(std::move(qs), values, assigned))
      return values;
    return std::nullopt;
  }

  bool incomplete() const { return incomplete_; }

private:
  void checkDeadline() {
    if (++ticks_ % 256 == 0 && std::chrono::steady_clock::now() > deadline_)
      throw Unknown{"timeout"};
  }

  /// Drops satisfied ground rows. Returns false on a ground contradiction.
  static bool simplify(std::vector<Ineq> &qs) {
    std::vector<Ineq> out;
    for (auto &q : qs) {
      if (!normalize(q))
        return false;
      if (!isGround(q))
        out.push_back(std::move(q));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    qs = std::move(out);
    return true;
  }

  /// Fourier-Motzkin: eliminate variable `v`. Returns false on contradiction.
  bool eliminate(std::vector<Ineq> &qs, size_t v) {
    std::vector<Ineq> pos, neg, rest;
    for (auto &q : qs) {
      if (q.a[v] > 0)
        pos.push_back(q);
      else if (q.a[v] < 0)
        neg.push_back(q);
      else
        rest.push_back(q);
    }
    if (pos.size() * neg.size() + rest.size() > opts_.projectionBudget)
      throw Unknown{"projection budget"};
    for (const auto &p : pos)
      for (const auto &n : neg) {
        checkDeadline();
        int64_t kp = -n.a[v], kn = p.a[v];
        Ineq r;
        r.a.resize(p.a.size());
        for (size_t i = 0; i < r.a.size(); ++i)
          r.a[i] = checkedAdd(checkedMul(p.a[i], kp), checkedMul(n.a[i], kn));
        r.c = checkedAdd(checkedMul(p.c, kp), checkedMul(n.c, kn));
        rest.push_back(std::move(r));
      }
    qs = std::move(rest);
    return simplify(qs);
  }

  /// Integer interval for variable `v` implied by the rational shadow.
  /// Returns false if the shadow is empty.
  bool project(const std::vector<Ineq> &qs, const std::vector<bool> &assigned,
               size_t v, int64_t &lo, int64_t &hi) {
    std::vector<Ineq> work = qs;
    for (size_t u = 0; u < vars_.size(); ++u) {
      if (u == v || assigned[u])
        continue;
      if (!eliminate(work, u))
        return false;
    }
    lo = -kInf;
    hi = kInf;
    for (const auto &q : work) {
      int64_t a = q.a[v];
      if (a > 0)
        hi = std::min(hi, floorDiv(-q.c, a));
      else if (a < 0)
        lo = std::max(lo, ceilDiv(q.c, -a));
    }
    return lo <= hi;
  }

  static void assign(std::vector<Ineq> &qs, size_t v, int64_t value) {
    for (auto &q : qs) {
      if (q.a[v] == 0)
        continue;
      q.c = checkedAdd(q.c, checkedMul(q.a[v], value));
      q.a[v] = 0;
    }
  }

  /// Opaque symbols are solved last and try their defining value first.
  size_t pickVariable(const std::vector<Ineq> &qs,
                      const std::vector<bool> &assigned) const {
    size_t best = vars_.size();
    for (size_t v = 0; v < vars_.size(); ++v) {
      if (assigned[v])
        continue;
      bool used = std::any_of(qs.begin(), qs.end(),
                              [&](const Ineq &q) { return q.a[v] != 0; });
      if (!used)
        continue;
      if (best == vars_.size() || (defs_[best] && !defs_[v]))
        best = v;
    }
    return best;
  }

  std::optional<int64_t> preferredValue(size_t v,
                                        const std::vector<int64_t> &values,
                                        const std::vector<bool> &assigned) {
    if (!defs_[v])
      return std::nullopt;
    Model m;
    for (size_t u = 0; u < vars_.size(); ++u) {
      if (defs_[u])
        continue;
      if (!assigned[u])
        continue;
      m[vars_[u]] = values[u];
    }
    for (const auto &s : defs_[v]->lhs.freeSymbols())
      if (!m.count(s))
        return std::nullopt;
    for (const auto &s : defs_[v]->rhs.freeSymbols())
      if (!m.count(s))
        return std::nullopt;
    try {
      return evaluateOpaque(*defs_[v], m);
    } catch (const std::exception &) {
      return std::nullopt;
    }
  }

  bool search(std::vector<Ineq> qs, std::vector<int64_t> &values,
              std::vector<bool> &assigned) {
    checkDeadline();
    if (!simplify(qs))
      return false;
    size_t v = pickVariable(qs, assigned);
    if (v == vars_.size())
      return true; // every remaining variable is unconstrained

    int64_t lo, hi;
    if (!project(qs, assigned, v, lo, hi))
      return false;

    int64_t center = std::clamp<int64_t>(0, lo, hi);
    if (auto pref = preferredValue(v, values, assigned))
      if (*pref >= lo && *pref <= hi)
        center = *pref;
    int64_t windowLo = lo, windowHi = hi;
    if (lo == -kInf || center - lo > opts_.fallbackRange) {
      windowLo = center - opts_.fallbackRange;
      if (lo != windowLo)
        clipped_ = true;
    }
    if (hi == kInf || hi - center > opts_.fallbackRange) {
      windowHi = center + opts_.fallbackRange;
      if (hi != windowHi)
        clipped_ = true;
    }

    assigned[v] = true;
    for (int64_t d = 0;; ++d) {
      bool any = false;
      for (int sign : {1, -1}) {
        if (d == 0 && sign == -1)
          continue;
        int64_t val = center + sign * d;
        if (val < windowLo || val > windowHi)
          continue;
        any = true;
        std::vector<Ineq> next = qs;
        assign(next, v, val);
        values[v] = val;
        if (search(std::move(next), values, assigned))
          return true;
      }
      if (!any)
        break;
    }
    assigned[v] = false;
    values[v] = 0;
    if (clipped_)
      incomplete_ = true;
    return false;
  }

  std::vector<std::string> vars_;
  std::vector<std::shared_ptr<const OpaqueDef>> defs_;
  const SolverOptions &opts_;
  std::chrono::steady_clock::time_point deadline_;
  uint64_t ticks_ = 0;
  bool clipped_ = false;
  bool incomplete_ = false;
};

void collectOpaque(const Constraint &c,
                   std::map<std::string, OpaqueDef> &defs) {
  if (c.kind() == Constraint::Kind::Atom) {
    for (const auto &[name, def] : c.atomTerm().opaqueDefs())
      defs.emplace(name, *def);
    return;
  }
  for (const auto &k : c.children())
    collectOpaque(k, defs);
}

void collectSolverSymbols(const Constraint &c, std::set<std::string> &out) {
  if (c.kind() == Constraint::Kind::Atom) {
    for (const auto &[s, k] : c.atomTerm().coefficients())
      out.insert(s);
    return;
  }
  for (const auto &k : c.children())
    collectSolverSymbols(k, out);
}

} // namespace

SatResult Solver::checkSat(const Constraint &c) const {
  SatResult result;
  auto deadline = std::chrono::steady_clock::now() + opts_.timeout;
  std::map<std::string, OpaqueDef> opaque;
  collectOpaque(c, opaque);
  std::set<std::string> symbolSet;
  collectSolverSymbols(c, symbolSet);
  std::vector<std::string> vars(symbolSet.begin(), symbolSet.end());
  std::vector<std::shared_ptr<const OpaqueDef>> defs;
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < vars.size(); ++i) {
    index[vars[i]] = i;
    auto it = opaque.find(vars[i]);
    defs.push_back(it == opaque.end()
                       ? nullptr
                       : std::make_shared<const OpaqueDef>(it->second));
  }
  bool sawIncomplete = false, sawBadOpaqueModel = false;
  try {
    std::vector<Disjunct> dnf;
    toDnf(c, dnf, opts_.maxDisjuncts);
    for (const auto &d : dnf) {
      std::vector<Ineq> qs, eqs;
      for (const auto &[t, rel] : d) {
        Ineq q;
        q.a.assign(vars.size(), 0);
        for (const auto &[s, k] : t.coefficients())
          q.a[index.at(s)] = k;
        q.c = t.constantPart();
        (rel == Rel::Le ? qs : eqs).push_back(std::move(q));
      }
      size_t nvars = vars.size();
      EqualitySolver equalities;
      if (!equalities.run(eqs, qs, nvars))
        continue;
      std::vector<std::string> names = vars;
      std::vector<std::shared_ptr<const OpaqueDef>> namesDefs = defs;
      for (size_t i = vars.size(); i < nvars; ++i) {
        names.push_back("$sigma" + std::to_string(i));
        namesDefs.push_back(nullptr);
      }
      ConjunctionSearch search(names, namesDefs, opts_, deadline);
      auto sol = search.solve(std::move(qs));
      if (search.incomplete())
        sawIncomplete = true;
      if (!sol)
        continue;
      equalities.rebuild(*sol);
      Model model;
      for (const auto &s : c.freeSymbols())
        model[s] = 0;
      for (size_t i = 0; i < vars.size(); ++i)
        if (!defs[i])
          model[vars[i]] = (*sol)[i];
      bool ok = false;
      try {
        ok = c.evaluate(model);
      } catch (const std::exception &) {
        ok = false;
      }
      if (ok) {
        result.verdict = Verdict::Sat;
        result.model = std::move(model);
        return result;
      }
      if (opaque.empty())
        throw std::logic_error("solver produced a model that does not "
                               "satisfy a linear formula: " +
                               c.str());
      sawBadOpaqueModel = true;
    }
  } catch (const Unknown &u) {
    result.verdict = Verdict::Unknown;
    result.reason = u.reason;
    return result;
  } catch (const ArithmeticOverflow &) {
    result.verdict = Verdict::Unknown;
    result.reason = "coefficient overflow";
    return result;
  }
  if (sawBadOpaqueModel) {
    result.verdict = Verdict::Unknown;
    result.reason = "non-linear terms";
  } else if (sawIncomplete) {
    result.verdict = Verdict::Unknown;
    result.reason = "search window exhausted";
  } else {
    result.verdict = Verdict::Unsat;
  }
  return result;
}

ValidityResult Solver::checkValid(const Constraint &c) const {
  ValidityResult r;
  SatResult s = checkSat(Constraint::negate(c));
  switch (s.verdict) {
  case Verdict::Unsat:
    r.verdict = Validity::Valid;
    break;
  case Verdict::Sat:
    r.verdict = Validity::Invalid;
    r.counterModel = std::move(s.model);
    if (c.evaluate(r.counterModel))
      throw std::logic_error("counter-model does not refute " + c.str());
    break;
  case Verdict::Unknown:
    r.verdict = Validity::Unknown;
    r.reason = std::move(s.reason);
    break;
  }
  return r;
}

} // namespace symdeffix
