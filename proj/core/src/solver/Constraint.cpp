//===-- Constraint.cpp ----------------------------------------------------===//

#include "symdeffix/Constraint.h"

#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace symdeffix {

struct Constraint::Node {
  Kind kind = Kind::True;
  Term term;
  Rel rel = Rel::Le;
  std::vector<Constraint> kids;
};

namespace {

int64_t coefficientGcd(const Term &t) {
  int64_t g = 0;
  for (const auto &[s, c] : t.coefficients())
    g = std::gcd(g, c < 0 ? -c : c);
  return g;
}

} // namespace

Constraint::Constraint() : Constraint(top()) {}

Constraint Constraint::top() {
  static const auto n = std::make_shared<const Node>(Node{Kind::True, {}, {}, {}});
  return Constraint(n);
}

Constraint Constraint::bottom() {
  static const auto n =
      std::make_shared<const Node>(Node{Kind::False, {}, {}, {}});
  return Constraint(n);
}

Constraint Constraint::atom(const Term &t, Rel rel) {
  if (t.isConstant()) {
    int64_t c = t.constantPart();
    bool v = rel == Rel::Le ? c <= 0 : rel == Rel::Eq ? c == 0 : c != 0;
    return v ? top() : bottom();
  }
  int64_t g = coefficientGcd(t);
  Term n = t;
  if (rel == Rel::Le) {
    if (g > 1)
      n = t.reduced(g, ceilDiv(t.constantPart(), g));
  } else {
    if (t.constantPart() % g != 0)
      return rel == Rel::Eq ? bottom() : top();
    if (g > 1)
      n = t.reduced(g, t.constantPart() / g);
    if (n.coefficients().begin()->second < 0)
      n = -n;
  }
  return Constraint(std::make_shared<const Node>(Node{Kind::Atom, n, rel, {}}));
}

Constraint Constraint::lt(const Term &a, const Term &b) {
  return atom(a - b + Term::constant(1), Rel::Le);
}
Constraint Constraint::le(const Term &a, const Term &b) {
  return atom(a - b, Rel::Le);
}
Constraint Constraint::gt(const Term &a, const Term &b) { return lt(b, a); }
Constraint Constraint::ge(const Term &a, const Term &b) { return le(b, a); }
Constraint Constraint::eq(const Term &a, const Term &b) {
  return atom(a - b, Rel::Eq);
}
Constraint Constraint::ne(const Term &a, const Term &b) {
  return atom(a - b, Rel::Ne);
}

Constraint Constraint::conj(const std::vector<Constraint> &cs) {
  std::vector<Constraint> kids;
  for (const auto &c : cs) {
    switch (c.kind()) {
    case Kind::True:
      break;
    case Kind::False:
      return bottom();
    case Kind::And:
      kids.insert(kids.end(), c.children().begin(), c.children().end());
      break;
    default:
      kids.push_back(c);
    }
  }
  if (kids.empty())
    return top();
  if (kids.size() == 1)
    return kids.front();
  return Constraint(
      std::make_shared<const Node>(Node{Kind::And, {}, {}, std::move(kids)}));
}

Constraint Constraint::disj(const std::vector<Constraint> &cs) {
  std::vector<Constraint> kids;
  for (const auto &c : cs) {
    switch (c.kind()) {
    case Kind::False:
      break;
    case Kind::True:
      return top();
    case Kind::Or:
      kids.insert(kids.end(), c.children().begin(), c.children().end());
      break;
    default:
      kids.push_back(c);
    }
  }
  if (kids.empty())
    return bottom();
  if (kids.size() == 1)
    return kids.front();
  return Constraint(
      std::make_shared<const Node>(Node{Kind::Or, {}, {}, std::move(kids)}));
}

Constraint Constraint::negate(const Constraint &c) {
  switch (c.kind()) {
  case Kind::True:
    return bottom();
  case Kind::False:
    return top();
  case Kind::Atom:
    switch (c.atomRel()) {
    case Rel::Le: // !(t <= 0)  <=>  -t + 1 <= 0
      return atom(-c.atomTerm() + Term::constant(1), Rel::Le);
    case Rel::Eq:
      return atom(c.atomTerm(), Rel::Ne);
    case Rel::Ne:
      return atom(c.atomTerm(), Rel::Eq);
    }
    break;
  case Kind::And: {
    std::vector<Constraint> ks;
    for (const auto &k : c.children())
      ks.push_back(negate(k));
    return disj(ks);
  }
  case Kind::Or: {
    std::vector<Constraint> ks;
    for (const auto &k : c.children())
      ks.push_back(negate(k));
    return conj(ks);
  }
  }
  return top();
}

Constraint Constraint::implies(const Constraint &a, const Constraint &b) {
  return disj({negate(a), b});
}

Constraint::Kind Constraint::kind() const { return node_->kind; }
const Term &Constraint::atomTerm() const { return node_->term; }
Rel Constraint::atomRel() const { return node_->rel; }
const std::vector<Constraint> &Constraint::children() const {
  return node_->kids;
}

bool Constraint::evaluate(const Model &m) const {
  switch (kind()) {
  case Kind::True:
    return true;
  case Kind::False:
    return false;
  case Kind::Atom: {
    int64_t v = atomTerm().evaluate(m);
    return atomRel() == Rel::Le ? v <= 0 : atomRel() == Rel::Eq ? v == 0 : v != 0;
  }
  case Kind::And:
    for (const auto &k : children())
      if (!k.evaluate(m))
        return false;
    return true;
  case Kind::Or:
    for (const auto &k : children())
      if (k.evaluate(m))
        return true;
    return false;
  }
  return false;
}

Constraint Constraint::substitute(const std::string &sym, const Term &by) const {
  return substitute(std::map<std::string, Term>{{sym, by}});
}

Constraint
Constraint::substitute(const std::map<std::string, Term> &subst) const {
  switch (kind()) {
  case Kind::True:
  case Kind::False:
    return *this;
  case Kind::Atom:
    return atom(atomTerm().substitute(subst), atomRel());
  case Kind::And:
  case Kind::Or: {
    std::vector<Constraint> ks;
    for (const auto &k : children())
      ks.push_back(k.substitute(subst));
    return kind() == Kind::And ? conj(ks) : disj(ks);
  }
  }
  return *this;
}

std::set<std::string> Constraint::freeSymbols() const {
  std::set<std::string> out;
  if (kind() == Kind::Atom)
    return atomTerm().freeSymbols();
  for (const auto &k : children()) {
    auto s = k.freeSymbols();
    out.insert(s.begin(), s.end());
  }
  return out;
}

bool Constraint::hasOpaque() const {
  if (kind() == Kind::Atom)
    return atomTerm().hasOpaque();
  for (const auto &k : children())
    if (k.hasOpaque())
      return true;
  return false;
}

std::string Constraint::str() const {
  switch (kind()) {
  case Kind::True:
    return "true";
  case Kind::False:
    return "false";
  case Kind::Atom: {
    const char *op = atomRel() == Rel::Le   ? "<="
                     : atomRel() == Rel::Eq ? "="
                                            : "distinct";
    return std::string("(") + op + " " + atomTerm().str() + " 0)";
  }
  case Kind::And:
  case Kind::Or: {
    std::string s = kind() == Kind::And ? "(and" : "(or";
    for (const auto &k : children())
      s += " " + k.str();
    return s + ")";
  }
  }
  return "true";
}

//===----------------------------------------------------------------------===//
// S-expression reader
//===----------------------------------------------------------------------===//

namespace {

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool isList = false;
};

class SExprReader {
public:
  explicit SExprReader(const std::string &text) : text_(text) {}

  SExpr readAll() {
    SExpr e = read();
    skipSpace();
    if (pos_ != text_.size())
      fail("trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw std::invalid_argument("s-expression: " + msg + " at offset " +
                                std::to_string(pos_));
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_]))
      ++pos_;
  }

  SExpr read() {
    skipSpace();
    if (pos_ >= text_.size())
      fail("unexpected end of input");
    SExpr e;
    if (text_[pos_] == '(') {
      ++pos_;
      e.isList = true;
      for (;;) {
        skipSpace();
        if (pos_ >= text_.size())
          fail("unbalanced '('");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.list.push_back(read());
      }
      return e;
    }
    if (text_[pos_] == ')')
      fail("unexpected ')'");
    size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace((unsigned char)text_[pos_]) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    e.atom = text_.substr(start, pos_ - start);
    return e;
  }

  const std::string &text_;
  size_t pos_ = 0;
};

bool isInteger(const std::string &s) {
  size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i == s.size())
    return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit((unsigned char)s[i]))
      return false;
  return true;
}

Term toTerm(const SExpr &e) {
  if (!e.isList) {
    if (isInteger(e.atom))
      return Term::constant(std::stoll(e.atom));
    return Term::symbol(e.atom);
  }
  if (e.list.empty() || e.list[0].isList)
    throw std::invalid_argument("s-expression: malformed term");
  const std::string &op = e.list[0].atom;
  std::vector<Term> args;
  for (size_t i = 1; i < e.list.size(); ++i)
    args.push_back(toTerm(e.list[i]));
  if (args.empty())
    throw std::invalid_argument("s-expression: operator without operands");
  if (op == "+") {
    Term r;
    for (const auto &a : args)
      r = r + a;
    return r;
  }
  if (op == "-") {
    if (args.size() == 1)
      return -args[0];
    Term r = args[0];
    for (size_t i = 1; i < args.size(); ++i)
      r = r - args[i];
    return r;
  }
  if (op == "*") {
    Term r = args[0];
    for (size_t i = 1; i < args.size(); ++i)
      r = Term::mul(r, args[i]);
    return r;
  }
  if (args.size() == 2 && (op == "/" || op == "div"))
    return Term::div(args[0], args[1]);
  if (args.size() == 2 && (op == "%" || op == "mod"))
    return Term::mod(args[0], args[1]);
  throw std::invalid_argument("s-expression: unknown term operator '" + op +
                              "'");
}

Constraint toConstraint(const SExpr &e) {
  if (!e.isList) {
    if (e.atom == "true")
      return Constraint::top();
    if (e.atom == "false")
      return Constraint::bottom();
    throw std::invalid_argument("s-expression: expected formula, got '" +
                                e.atom + "'");
  }
  if (e.list.empty() || e.list[0].isList)
    throw std::invalid_argument("s-expression: malformed formula");
  const std::string &op = e.list[0].atom;
  auto sub = [&](size_t i) { return toConstraint(e.list[i]); };
  if (op == "and" || op == "or") {
    std::vector<Constraint> ks;
    for (size_t i = 1; i < e.list.size(); ++i)
      ks.push_back(sub(i));
    return op == "and" ? Constraint::conj(ks) : Constraint::disj(ks);
  }
  if (op == "not" && e.list.size() == 2)
    return Constraint::negate(sub(1));
  if (op == "=>" && e.list.size() == 3)
    return Constraint::implies(sub(1), sub(2));
  if (e.list.size() != 3)
    throw std::invalid_argument("s-expression: '" + op +
                                "' expects two operands");
  Term a = toTerm(e.list[1]), b = toTerm(e.list[2]);
  if (op == "<")
    return Constraint::lt(a, b);
  if (op == "<=")
    return Constraint::le(a, b);
  if (op == ">")
    return Constraint::gt(a, b);
  if (op == ">=")
    return Constraint::ge(a, b);
  if (op == "=")
    return Constraint::eq(a, b);
  if (op == "distinct" || op == "!=")
    return Constraint::ne(a, b);
  throw std::invalid_argument("s-expression: unknown formula operator '" + op +
                              "'");
}

} // namespace

Constraint parseConstraint(const std::string &text) {
  return toConstraint(SExprReader(text).readAll());
}

Term parseTerm(const std::string &text) {
  return toTerm(SExprReader(text).readAll());
}

} // namespace symdeffix
