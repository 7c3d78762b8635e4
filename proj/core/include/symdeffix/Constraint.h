//===-- Constraint.h - Quantifier-free linear integer formulas --*- C++ -*-===//
//
// Formulas are kept in negation normal form at all times: negation is pushed
// into atoms on construction, so a Constraint tree contains only And, Or,
// True, False and atoms of the form `term REL 0` with REL in {<=, =, !=}.
// Atoms are gcd-normalized, which tightens `<=` bounds to integers.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_CONSTRAINT_H
#define SYMDEFFIX_CONSTRAINT_H

#include "symdeffix/Term.h"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace symdeffix {

enum class Rel { Le, Eq, Ne };

class Constraint {
public:
  enum class Kind { True, False, Atom, And, Or };

  Constraint(); // true

  static Constraint top();
  static Constraint bottom();
  static Constraint atom(const Term &t, Rel rel);

  static Constraint lt(const Term &a, const Term &b);
  static Constraint le(const Term &a, const Term &b);
  static Constraint gt(const Term &a, const Term &b);
  static Constraint ge(const Term &a, const Term &b);
  static Constraint eq(const Term &a, const Term &b);
  static Constraint ne(const Term &a, const Term &b);

  static Constraint conj(const std::vector<Constraint> &cs);
  static Constraint disj(const std::vector<Constraint> &cs);
  static Constraint negate(const Constraint &c);
  static Constraint implies(const Constraint &a, const Constraint &b);

  Constraint operator&&(const Constraint &o) const { return conj({*this, o}); }
  Constraint operator||(const Constraint &o) const { return disj({*this, o}); }
  Constraint operator!() const { return negate(*this); }

  Kind kind() const;
  bool isTrue() const { return kind() == Kind::True; }
  bool isFalse() const { return kind() == Kind::False; }
  const Term &atomTerm() const;
  Rel atomRel() const;
  const std::vector<Constraint> &children() const;

  bool evaluate(const Model &m) const;
  Constraint substitute(const std::string &sym, const Term &by) const;
  Constraint substitute(const std::map<std::string, Term> &subst) const;
  std::set<std::string> freeSymbols() const;
  bool hasOpaque() const;

  /// S-expression rendering; parseable by parseConstraint().
  std::string str() const;

  bool operator==(const Constraint &o) const { return str() == o.str(); }

private:
  struct Node;
  explicit Constraint(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the s-expression form documented in docs/grammar.md. Throws
/// std::invalid_argument on malformed input.
Constraint parseConstraint(const std::string &text);
Term parseTerm(const std::string &text);

} // namespace symdeffix

#endif
