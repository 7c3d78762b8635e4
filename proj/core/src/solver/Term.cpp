//===-- Term.cpp ----------------------------------------------------------===//

#include "symdeffix/Term.h"

#include <sstream>

namespace symdeffix {

int64_t checkedAdd(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw ArithmeticOverflow("integer overflow in addition");
  return r;
}

int64_t checkedMul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw ArithmeticOverflow("integer overflow in multiplication");
  return r;
}

int64_t floorDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

int64_t ceilDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0)))
    ++q;
  return q;
}

Term Term::constant(int64_t value) {
  Term t;
  t.const_ = value;
  return t;
}

Term Term::symbol(const std::string &name) {
  Term t;
  t.coeffs_[name] = 1;
  return t;
}

int64_t Term::coefficientOf(const std::string &sym) const {
  auto it = coeffs_.find(sym);
  return it == coeffs_.end() ? 0 : it->second;
}

void Term::addScaled(const Term &o, int64_t k) {
  if (k == 0)
    return;
  const_ = checkedAdd(const_, checkedMul(o.const_, k));
  for (const auto &[sym, c] : o.coeffs_) {
    int64_t nc = checkedAdd(coefficientOf(sym), checkedMul(c, k));
    if (nc == 0) {
      coeffs_.erase(sym);
      opaque_.erase(sym);
    } else {
      coeffs_[sym] = nc;
      auto od = o.opaque_.find(sym);
      if (od != o.opaque_.end())
        opaque_[sym] = od->second;
    }
  }
}

Term Term::operator+(const Term &o) const {
  Term r = *this;
  r.addScaled(o, 1);
  return r;
}

Term Term::operator-(const Term &o) const {
  Term r = *this;
  r.addScaled(o, -1);
  return r;
}

Term Term::operator-() const { return scaled(-1); }

Term Term::scaled(int64_t k) const {
  Term r;
  r.addScaled(*this, k);
  return r;
}

Term Term::reduced(int64_t divisor, int64_t newConstant) const {
  Term r = *this;
  for (auto &[s, c] : r.coeffs_)
    c /= divisor;
  r.const_ = newConstant;
  return r;
}

Term Term::makeOpaque(char op, const Term &a, const Term &b) {
  std::string name =
      std::string("(") + op + " " + a.str() + " " + b.str() + ")";
  Term t;
  t.coeffs_[name] = 1;
  t.opaque_[name] = std::make_shared<OpaqueDef>(OpaqueDef{op, a, b});
  return t;
}

Term Term::mul(const Term &a, const Term &b) {
  if (a.isConstant())
    return b.scaled(a.const_);
  if (b.isConstant())
    return a.scaled(b.const_);
  // Keep operand order canonical so x*y and y*x share one opaque symbol.
  return b < a ? makeOpaque('*', b, a) : makeOpaque('*', a, b);
}

Term Term::div(const Term &a, const Term &b) {
  if (a.isConstant() && b.isConstant() && b.const_ != 0) {
    if (a.const_ == INT64_MIN && b.const_ == -1)
      throw ArithmeticOverflow("integer overflow in division");
    return constant(a.const_ / b.const_);
  }
  if (b.isConstant() && (b.const_ == 1))
    return a;
  return makeOpaque('/', a, b);
}

Term Term::mod(const Term &a, const Term &b) {
  if (a.isConstant() && b.isConstant() && b.const_ != 0) {
    if (b.const_ == -1)
      return constant(0);
    return constant(a.const_ % b.const_);
  }
  return makeOpaque('%', a, b);
}

Term Term::substitute(const std::string &sym, const Term &by) const {
  return substitute(std::map<std::string, Term>{{sym, by}});
}

Term Term::substitute(const std::map<std::string, Term> &subst) const {
  Term r = constant(const_);
  for (const auto &[s, c] : coeffs_) {
    auto od = opaque_.find(s);
    if (od != opaque_.end()) {
      const OpaqueDef &d = *od->second;
      Term l = d.lhs.substitute(subst), rr = d.rhs.substitute(subst);
      Term rebuilt = d.op == '*'   ? mul(l, rr)
                     : d.op == '/' ? div(l, rr)
                                   : mod(l, rr);
      r.addScaled(rebuilt, c);
      continue;
    }
    auto it = subst.find(s);
    if (it != subst.end())
      r.addScaled(it->second, c);
    else
      r.addScaled(symbol(s), c);
  }
  return r;
}

std::set<std::string> Term::freeSymbols() const {
  std::set<std::string> out;
  for (const auto &[s, c] : coeffs_) {
    auto od = opaque_.find(s);
    if (od == opaque_.end()) {
      out.insert(s);
      continue;
    }
    auto l = od->second->lhs.freeSymbols();
    auto r = od->second->rhs.freeSymbols();
    out.insert(l.begin(), l.end());
    out.insert(r.begin(), r.end());
  }
  return out;
}

int64_t evaluateOpaque(const OpaqueDef &def, const Model &m) {
  int64_t a = def.lhs.evaluate(m), b = def.rhs.evaluate(m);
  switch (def.op) {
  case '*':
    return checkedMul(a, b);
  case '/':
    if (b == 0)
      throw std::domain_error("division by zero");
    if (a == INT64_MIN && b == -1)
      throw ArithmeticOverflow("integer overflow in division");
    return a / b;
  default:
    if (b == 0)
      throw std::domain_error("remainder by zero");
    return b == -1 ? 0 : a % b;
  }
}

int64_t Term::evaluate(const Model &m) const {
  int64_t v = const_;
  for (const auto &[s, c] : coeffs_) {
    int64_t sv;
    auto od = opaque_.find(s);
    if (od != opaque_.end()) {
      sv = evaluateOpaque(*od->second, m);
    } else {
      auto it = m.find(s);
      sv = it == m.end() ? 0 : it->second;
    }
    v = checkedAdd(v, checkedMul(c, sv));
  }
  return v;
}

std::string Term::str() const {
  if (coeffs_.empty())
    return std::to_string(const_);
  if (coeffs_.size() == 1 && const_ == 0 && coeffs_.begin()->second == 1)
    return coeffs_.begin()->first;
  std::ostringstream os;
  os << "(+";
  for (const auto &[s, c] : coeffs_) {
    if (c == 1)
      os << " " << s;
    else
      os << " (* " << c << " " << s << ")";
  }
  if (const_ != 0)
    os << " " << const_;
  os << ")";
  return os.str();
}

bool Term::operator<(const Term &o) const {
  if (coeffs_ != o.coeffs_)
    return coeffs_ < o.coeffs_;
  return const_ < o.const_;
}

} // namespace symdeffix
